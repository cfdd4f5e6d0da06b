"""Monte Carlo oracle: projected Euler paths of the reflected process.

Each step adds a correlated Gaussian increment ``mu dt + L dW`` (``L`` the
Cholesky factor of ``[[1, rho], [rho, 1]]``) and then projects back onto the
quadrant: a negative first coordinate ``-a`` is removed by pushing along
``(1, -r1)`` with local-time increment ``a``, then a negative second
coordinate along ``(-r2, 1)``.  When the second push leaves the first
coordinate negative the step has no feasible projection and the path is
absorbed; this happens only near the corner, where the convexity of the
reflection cone fails because ``r1 r2 >= 1``.

Random numbers come from a counter-based stream: the normal pair of step
``k`` on path ``i`` is a pure function of ``(seed, i, k)``, so the estimate
does not depend on how paths are scheduled.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from ..errors import AllCensored
from .bounds import choose_escape_radius, escape_bias_bound

ABSORBED, ESCAPED, CENSORED = 0, 1, 2
_NAMES = {ABSORBED: "Absorbed", ESCAPED: "Escaped", CENSORED: "Censored"}

# steps between evaluations of the explicit escape criterion
_CHECK_EVERY = 16

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _path_key(seed, path):
    return _mix(np.uint64(seed) + _mix(np.uint64(path) * _GOLDEN + np.uint64(1)))


@njit(cache=True)
def _uniform(key, counter):
    # 53 random bits mapped to (0, 1]
    h = _mix(key + np.uint64(counter) * _GOLDEN)
    return (float(h >> np.uint64(11)) + 1.0) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _normal_pair(key, step):
    u1 = _uniform(key, 2 * step)
    u2 = _uniform(key, 2 * step + 1)
    r = math.sqrt(-2.0 * math.log(u1))
    return r * math.cos(2.0 * math.pi * u2), r * math.sin(2.0 * math.pi * u2)


@njit(cache=True)
def _bridge_min(x0, x1, dt, u):
    # minimum of a unit-variance Brownian bridge from x0 to x1 over dt
    d = x1 - x0
    return 0.5 * (x0 + x1 - math.sqrt(d * d - 2.0 * dt * math.log(u)))


@njit(cache=True)
def _absorb_bound(a, b, mu1, mu2, r1, r2):
    b1 = math.exp(-a * mu1) + math.exp(-(a / r2 + 2 * b) * mu2)
    b2 = math.exp(-b * mu2) + math.exp(-(b / r1 + 2 * a) * mu1)
    return min(b1, b2)


@njit(cache=True)
def _run(z1, z2, mu1, mu2, rho, r1, r2, dt, eps, R, tol, max_time, seed, first,
         count, bridge):
    out = np.empty(count, dtype=np.int8)
    times = np.empty(count)
    sq = math.sqrt(dt)
    c = math.sqrt(1.0 - rho * rho)
    eps2, R2 = eps * eps, R * R
    max_steps = int(math.ceil(max_time / dt))
    for i in range(count):
        key = _path_key(seed, first + i)
        a, b = z1, z2
        n2 = a * a + b * b
        state = CENSORED
        k = 0
        if n2 <= eps2:
            state = ABSORBED
        elif n2 >= R2:
            state = ESCAPED
        while state == CENSORED and k < max_steps:
            g1, g2 = _normal_pair(key, k)
            a0, b0 = a, b
            a += mu1 * dt + sq * g1
            b += mu2 * dt + sq * (rho * g1 + c * g2)
            if bridge:
                # local time = minus the minimum of the Brownian bridge
                # between the endpoints of each coordinate, when negative
                l1 = -_bridge_min(a0, a, dt, _uniform(key, 2 * max_steps + 2 * k))
                if l1 > 0.0:
                    a += l1
                    b -= r1 * l1
                l2 = -_bridge_min(b0, b, dt, _uniform(key, 2 * max_steps + 2 * k + 1))
                if l2 > 0.0:
                    b += l2
                    a -= r2 * l2
                    if a < 0.0:
                        state = ABSORBED
                        k += 1
                        break
            else:
                if a < 0.0:
                    b -= r1 * (-a)
                    a = 0.0
                if b < 0.0:
                    a -= r2 * (-b)
                    b = 0.0
                    if a < 0.0:
                        state = ABSORBED
                        k += 1
                        break
            k += 1
            n2 = a * a + b * b
            if n2 <= eps2:
                state = ABSORBED
            elif n2 >= R2:
                state = ESCAPED
            elif k % _CHECK_EVERY == 0 and _absorb_bound(a, b, mu1, mu2, r1, r2) <= tol:
                state = ESCAPED
        out[i] = state
        times[i] = k * dt
    return out, times


@dataclass(frozen=True)
class McConfig:
    """Thresholds and budget of the simulator.

    ``None`` fields take their defaults in :meth:`resolve`:
    ``eps_absorb = 1e-3 min(1/mu1, 1/mu2)``, ``R_escape`` the smallest radius
    with escape bias at most ``escape_tol``, and ``max_time = 50 / min(mu1, mu2)``.

    A path is also declared escaped inside that radius once the explicit
    absorption bound at its position drops to ``escape_tol``; the bias this
    adds is covered by the same budget.
    """

    dt: float = 1e-4
    eps_absorb: float = None
    R_escape: float = None
    n_paths: int = 100_000
    seed: int = 0
    max_time: float = None
    escape_tol: float = 1e-4
    scheme: str = "bridge"

    def resolve(self, params):
        """Copy with every default filled in, validated."""
        p = params
        m = min(p.mu1, p.mu2)
        cfg = replace(
            self,
            eps_absorb=(self.eps_absorb if self.eps_absorb is not None
                        else 1e-3 / max(p.mu1, p.mu2)),
            R_escape=(self.R_escape if self.R_escape is not None
                      else choose_escape_radius(p, self.escape_tol)),
            max_time=self.max_time if self.max_time is not None else 50.0 / m)
        if cfg.scheme not in ("projection", "bridge"):
            raise ValueError("McConfig.scheme must be 'projection' or 'bridge'")
        if not cfg.dt > 0:
            raise ValueError("McConfig.dt must be > 0")
        if not 0 < cfg.eps_absorb < cfg.R_escape:
            raise ValueError("McConfig needs 0 < eps_absorb < R_escape")
        if int(cfg.n_paths) < 1:
            raise ValueError("McConfig.n_paths must be >= 1")
        if not 0 <= int(cfg.seed) < 2 ** 64:
            raise ValueError("McConfig.seed must be a 64-bit unsigned integer")
        return cfg


@dataclass(frozen=True)
class Outcome:
    """Fate of one path: ``kind`` in {"Absorbed", "Escaped", "Censored"}."""

    kind: str
    t: float


@dataclass(frozen=True)
class McEstimate:
    """Escape frequency with its binomial standard error.

    ``bias_bound`` adds the escape-radius bias and the censored fraction:
    a censored path could have ended either way.
    """

    p_escape_hat: float
    std_err: float
    bias_bound: float
    n_absorbed: int
    n_escaped: int
    n_censored: int

    @property
    def n_paths(self):
        return self.n_absorbed + self.n_escaped + self.n_censored

    def as_dict(self):
        return {"p_escape_hat": self.p_escape_hat, "std_err": self.std_err,
                "bias_bound": self.bias_bound, "n_absorbed": self.n_absorbed,
                "n_escaped": self.n_escaped, "n_censored": self.n_censored}


def _check_start(start):
    u, v = (float(s) for s in start)
    if u < 0 or v < 0:
        raise ValueError("start must lie in the closed quadrant")
    if u == 0 and v == 0:
        raise ValueError("start must differ from the origin")
    return u, v


def _simulate(start, params, cfg, first, count):
    u, v = _check_start(start)
    p = params
    return _run(u, v, p.mu1, p.mu2, p.rho, p.r1, p.r2, float(cfg.dt),
                float(cfg.eps_absorb), float(cfg.R_escape), float(cfg.escape_tol),
                float(cfg.max_time),
                np.uint64(int(cfg.seed)), np.uint64(first), int(count),
                cfg.scheme == "bridge")


def simulate_path(start, params, cfg=None, stream=0):
    """Simulate path number ``stream`` of the seeded family from ``start``.

    Returns
    -------
    Outcome
    """
    cfg = (cfg or McConfig()).resolve(params)
    out, t = _simulate(start, params, cfg, int(stream), 1)
    return Outcome(_NAMES[int(out[0])], float(t[0]))


def mc_escape_prob(start, params, cfg=None):
    """Estimate ``P_start[T = inf]`` from ``cfg.n_paths`` independent paths.

    Raises
    ------
    AllCensored
        If no path reaches either threshold before ``max_time``.
    """
    cfg = (cfg or McConfig()).resolve(params)
    n = int(cfg.n_paths)
    out, _ = _simulate(start, params, cfg, 0, n)
    counts = np.bincount(out, minlength=3)
    na, ne, nc = (int(c) for c in counts)
    if nc == n:
        raise AllCensored(f"all {n} paths censored at t = {cfg.max_time}",
                          quantity="max_time")
    p_hat = ne / n
    std = math.sqrt(max(p_hat * (1 - p_hat), 0.0) / n)
    bias = max(escape_bias_bound(params, cfg.R_escape), cfg.escape_tol) + nc / n
    return McEstimate(p_hat, std, bias, na, ne, nc)
