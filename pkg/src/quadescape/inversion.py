"""Probabilities from transforms: Laplace inversion and asymptotic shapes.

``psi1`` is the Laplace transform of the escape probability
``u -> P_{(u,0)}[T = inf]`` and ``1/x - psi1(x)`` that of the absorption
probability.  Both are inverted on a Bromwich line with the Euler-accelerated
Fourier series of Abate and Whitt.  Points of that line with ``rho < 0`` can
lie outside the domain bounded by the hyperbola; the evaluator continues
``psi1`` there (see :class:`~quadescape.bvp.Psi1Evaluator`).
"""

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import comb

from .bvp import build_evaluators, psi_eval
from .errors import ClampWarning, InversionUnstable, KernelZero
from .kernel import kernel_eval, special_points
from .model import AxisRegime, classify, wedge_geometry


@dataclass(frozen=True)
class InversionConfig:
    """Parameters of the Euler-accelerated Bromwich inversion.

    Attributes
    ----------
    M : int
        Number of terms of the Fourier series before averaging.
    E : int
        Depth of the binomial (Euler) average.
    A : float
        Abscissa multiplier; the line is ``Re s = A / (2 t)``.  The
        discretization error is about ``exp(-A)``.
    target_abs_tol : float
        Largest accepted disagreement between two consecutive Euler
        estimates before :class:`InversionUnstable` is raised.
    clamp_tol : float
        Excursion outside ``[0, 1]`` tolerated without a warning.
    """

    M: int = 40
    E: int = 20
    A: float = 18.4
    target_abs_tol: float = 1e-6
    clamp_tol: float = 1e-6

    def __post_init__(self):
        if self.M < 20 or self.E < 10 or not self.A > 0:
            raise ValueError("InversionConfig needs M >= 20, E >= 10, A > 0")


class Axis(str, Enum):
    horizontal = "horizontal"
    vertical = "vertical"


def _axis(axis):
    a = str(getattr(axis, "value", axis)).lower()
    if a in ("h", "horizontal", "x", "u"):
        return Axis.horizontal
    if a in ("v", "vertical", "y"):
        return Axis.vertical
    raise ValueError(f"unknown axis {axis!r}")


def euler_weights(t, cfg):
    """Bromwich nodes and weights of the Euler-averaged series.

    The averaged estimate is linear in the transform values, so that
    ``f(t[j]) ~ sum_k weight[j, k] * Re F(s[j, k])``.  ``weight_prev`` is the
    same average shifted by one term; the difference of the two estimates
    measures convergence.

    Returns
    -------
    t, s, weight, weight_prev : ndarray
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = cfg.M + cfg.E
    k = np.arange(n + 1)
    s = (cfg.A + 2j * math.pi * k[None, :]) / (2 * t[:, None])
    binom = comb(cfg.E, np.arange(cfg.E + 1)) / 2.0 ** cfg.E
    # coefficient of term k in sum_j binom[j] * partial_sum[M + j]
    tail = np.concatenate([[1.0], 1.0 - np.cumsum(binom)[:-1]])
    avg = np.ones(n + 1)
    avg[cfg.M:] = tail
    avg_prev = np.ones(n + 1)
    avg_prev[cfg.M - 1:n] = tail
    avg_prev[n] = 0.0
    base = (-1.0) ** k * np.where(k == 0, 1.0, 2.0)
    pref = math.exp(cfg.A / 2) / (2 * t[:, None])
    return t, s, pref * base * avg, pref * base * avg_prev


def euler_invert(F, t, cfg=None):
    """Invert the Laplace transform ``F`` of a real function at times ``t``.

    Parameters
    ----------
    F : callable
        Vectorized transform, ``F(s)`` for complex arrays ``s``.
    t : float or array_like
        Positive times.
    cfg : InversionConfig, optional

    Returns
    -------
    values, error_estimates : ndarray
    """
    cfg = cfg or InversionConfig()
    t, s, wt, wp = euler_weights(t, cfg)
    Fs = np.asarray(F(s.ravel())).reshape(s.shape).real
    est = np.sum(Fs * wt, axis=1)
    prev = np.sum(Fs * wp, axis=1)
    return est, np.abs(est - prev)


def _check(est, err, cfg, what):
    bad = err > cfg.target_abs_tol
    if np.any(bad):
        raise InversionUnstable(
            f"Euler estimates of {what} disagree by {float(np.max(err)):.3g}",
            quantity=what)


def _clamp(p, cfg, what):
    lo, hi = float(np.min(p)), float(np.max(p))
    if lo < -cfg.clamp_tol or hi > 1 + cfg.clamp_tol:
        warnings.warn(f"{what} left [0, 1] (range {lo:.3g}..{hi:.3g}); clamped",
                      ClampWarning, stacklevel=3)
    return np.clip(p, 0.0, 1.0)


class QuadrantSolver:
    """Escape and absorption probabilities for one parameter set.

    Parameters
    ----------
    params : ModelParams
    config : InversionConfig, optional
    method : {"auto", "bvp"}
        ``"auto"`` uses the closed form when ``r1 r2 = 1``; ``"bvp"`` always
        goes through the contour integral and the inversion.
    tolerances : BvpTolerances, optional
    evaluators : PsiEvaluators, optional
        Reuse transform evaluators already built for ``params``.

    Examples
    --------
    >>> from quadescape import validate_params, QuadrantSolver
    >>> s = QuadrantSolver(validate_params(1, 1, 0, 2, 0.5), method="bvp")
    >>> round(float(s.absorption_prob_axis(1.0)), 7)
    0.090718
    """

    def __init__(self, params, config=None, method="auto", tolerances=None,
                 evaluators=None):
        if method not in ("auto", "bvp"):
            raise ValueError("method must be 'auto' or 'bvp'")
        self.params = params
        self.config = config or InversionConfig()
        self.method = method
        self.geometry = wedge_geometry(params)
        self.classification = classify(params, self.geometry)
        self.kernel = special_points(params)
        self._tol = tolerances
        self._ev = evaluators

    @property
    def evaluators(self):
        if self._ev is None:
            self._ev = build_evaluators(self.params, self._tol)
        return self._ev

    @property
    def closed_form(self):
        return self.method == "auto" and self.classification.product_form

    def _psi_axis(self, axis):
        ev = self.evaluators
        return ev.psi1 if axis is Axis.horizontal else ev.psi2

    def _rate_axis(self, axis):
        return self.kernel.x1 if axis is Axis.horizontal else self.kernel.y2

    # ------------------------------------------------------------------
    def axis_probabilities(self, u, axis="horizontal"):
        """Absorption and escape probabilities at ``(u, 0)`` or ``(0, u)``.

        The smaller of the two is obtained by inverting its own transform
        (which keeps its relative accuracy); the other is its complement, so
        that the pair sums to one by construction.

        Returns
        -------
        p_absorb, p_escape : ndarray
        """
        axis = _axis(axis)
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if np.any(u <= 0):
            raise ValueError("u must be > 0")
        cfg = self.config
        if self.closed_form:
            pa = np.exp(self._rate_axis(axis) * u)
            return pa, 1.0 - pa
        psi = self._psi_axis(axis)
        pa, err = euler_invert(lambda s: 1.0 / s - psi.evaluate(s), u, cfg)
        _check(pa, err, cfg, "absorption probability")
        pe = np.empty_like(pa)
        small_escape = pa > 0.5
        if np.any(small_escape):
            e_est, e_err = euler_invert(psi.evaluate, u[small_escape], cfg)
            _check(e_est, e_err, cfg, "escape probability")
            pe[small_escape] = e_est
        pe[~small_escape] = 1.0 - pa[~small_escape]
        pe = _clamp(pe, cfg, "escape probability")
        pa = np.where(small_escape, 1.0 - pe, pa)
        pa = _clamp(pa, cfg, "absorption probability")
        pe = np.where(small_escape, pe, 1.0 - pa)
        return pa, pe

    def absorption_prob_axis(self, u, axis="horizontal"):
        """``P[T < inf]`` from a start on the given axis at distance ``u``."""
        pa, _ = self.axis_probabilities(u, axis)
        return pa[0] if np.ndim(u) == 0 else pa

    def escape_prob_axis(self, u, axis="horizontal"):
        """``P[T = inf]`` from a start on the given axis at distance ``u``."""
        _, pe = self.axis_probabilities(u, axis)
        return pe[0] if np.ndim(u) == 0 else pe

    # ------------------------------------------------------------------
    def psi(self, x, y):
        """Bivariate transform of the escape probability."""
        return psi_eval(x, y, self.evaluators)

    def interior_probabilities(self, u, v):
        """Absorption and escape probabilities from the interior point ``(u, v)``.

        Iterated Bromwich inversion of ``psi(x, y)``; costs about
        ``2 (M + E)**2`` transform evaluations.  The smaller probability is
        inverted directly, as in :meth:`axis_probabilities`.
        """
        u, v = float(u), float(v)
        if not (u > 0 and v > 0):
            raise ValueError("(u, v) must lie strictly inside the quadrant")
        cfg = self.config
        if self.closed_form:
            pa = math.exp(self.kernel.x1 * u + self.kernel.y2 * v)
            return pa, 1.0 - pa
        p = self.params
        ev = self.evaluators
        for A in (cfg.A, cfg.A + 0.37, cfg.A - 0.29):
            c2 = InversionConfig(cfg.M, cfg.E, A, cfg.target_abs_tol, cfg.clamp_tol)
            _, sx, wx, wxp = euler_weights(u, c2)
            _, sy, wy, wyp = euler_weights(v, c2)
            sx, sy = sx[0], sy[0]
            # the original in y is complex for complex x: use y-nodes and
            # their conjugates, each weighted by half the real-case weight
            ys = np.concatenate([sy, np.conj(sy)])
            X, Y = np.meshgrid(sx, ys, indexing="ij")
            K, k1, k2 = kernel_eval(X, Y, p)
            worst = float(np.min(np.abs(K) / (np.abs(X) ** 2 + np.abs(Y) ** 2)))
            if worst > 1e-7:
                break
        else:
            raise KernelZero(
                f"Bromwich grid meets K = 0 (min relative |K| {worst:.3g})",
                quantity="K")
        psi = (k1 * ev.psi1.evaluate(sx)[:, None]
               + k2 * ev.psi2.evaluate(ys)[None, :]) / K
        wy2 = np.concatenate([wy[0], wy[0]]) / 2
        wyp2 = np.concatenate([wyp[0], wyp[0]]) / 2

        def invert(table):
            inner = table @ wy2
            inner_p = table @ wyp2
            est = float(np.real(inner) @ wx[0])
            err = max(abs(est - float(np.real(inner) @ wxp[0])),
                      abs(est - float(np.real(inner_p) @ wx[0])))
            return est, err

        pe, err = invert(psi)
        if pe > 0.5:
            pa, err = invert(1.0 / (X * Y) - psi)
            _check(np.array([pa]), np.array([err]), c2, "absorption probability")
            pa = float(_clamp(np.array([pa]), c2, "absorption probability")[0])
            return pa, 1.0 - pa
        _check(np.array([pe]), np.array([err]), c2, "escape probability")
        pe = float(_clamp(np.array([pe]), c2, "escape probability")[0])
        return 1.0 - pe, pe

    def escape_prob_interior(self, u, v):
        return self.interior_probabilities(u, v)[1]

    def absorption_prob_interior(self, u, v):
        return self.interior_probabilities(u, v)[0]

    # ------------------------------------------------------------------
    def asymptotics(self, axis="horizontal"):
        return asymptotics(self.params, axis, self.geometry, self.classification,
                           self.kernel)


@dataclass(frozen=True)
class AsymptoticReport:
    """Shape ``u**power * exp(rate * u)`` of the axis absorption probability.

    ``origin_exponent`` is ``alpha``: the escape probability vanishes like
    ``u**alpha`` near the corner.  ``branch_point_in_S`` is False when the
    hypothesis behind the branch-point regimes fails.
    """

    axis: str
    regime: AxisRegime
    rate: float
    power: float
    origin_exponent: float
    branch_point_in_S: bool

    def as_dict(self):
        return {"axis": self.axis, "regime": self.regime.value, "rate": self.rate,
                "power": self.power, "origin_exponent": self.origin_exponent,
                "branch_point_in_S": self.branch_point_in_S}


def asymptotics(params, axis="horizontal", geometry=None, classification=None,
                kdata=None):
    """Asymptotic regime of the absorption probability along an axis."""
    axis = _axis(axis)
    g = geometry or wedge_geometry(params)
    c = classification or classify(params, g)
    kd = kdata or special_points(params)
    p = params
    if axis is Axis.horizontal:
        regime, pole, branch = c.axis_asymptotic_regime_h, kd.x1, kd.x_minus
        in_S = -(p.rho * branch + p.mu2) > 0
    else:
        regime, pole, branch = c.axis_asymptotic_regime_v, kd.y2, kd.y_minus
        in_S = -(p.rho * branch + p.mu1) > 0
    if regime is AxisRegime.PoleX1:
        rate, power = pole, 0.0
    elif regime is AxisRegime.BranchMinus32:
        rate, power = branch, -1.5
    else:
        rate, power = branch, -0.5
    return AsymptoticReport(axis.value, regime, float(rate), power, g.alpha, bool(in_S))


def evaluate_asymptote(u, report):
    """Un-normalized shape ``u**power * exp(rate * u)``."""
    u = np.asarray(u, dtype=float)
    return u ** report.power * np.exp(report.rate * u)


def fit_rate(u, p, power=0.0):
    """Least-squares slope of ``log p - power log u`` against ``u``."""
    u = np.asarray(u, dtype=float)
    return float(np.polyfit(u, np.log(p) - power * np.log(u), 1)[0])


def fit_origin_exponent(u, escape):
    """Log-log slope of the escape probability against ``u``."""
    return float(np.polyfit(np.log(u), np.log(escape), 1)[0])


def absorption_prob_axis(u, solver, axis="horizontal"):
    return solver.absorption_prob_axis(u, axis)


def escape_prob_interior(u, v, solver):
    return solver.escape_prob_interior(u, v)
