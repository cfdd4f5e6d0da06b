"""Explicit solution of the boundary value problem for ``psi1``.

``psi1(x) = int_0^inf exp(-x u) P_{(u,0)}[T = inf] du``, the transform of
the escape probability along the horizontal axis (so ``x psi1(x) -> 1`` as
``x -> 0``), solves a Carleman problem on the hyperbola ``H``:
``psi1(conj(x)) = G(x) psi1(x)``.  Mapping the domain ``G`` right of ``H``
through the gluing function ``w`` turns it into a Riemann-Hilbert problem on
a half line, whose solution is

    psi1(x) = w'(0) / (w(x) - w(0)) * ((w(0) - w(x1)) / (w(x) - w(x1)))**(-chi)
              * exp(I(w(x))),

    I(omega) = 1/(2 pi i) int_{H+} log G(t)
               [w'(t) / (w(t) - omega) - w'(t) / (w(t) - w(0))] dt.

Numerics
--------
Along ``H+`` the parameter is ``y`` and the integration variable is
``v = log(y - y+)``, which resolves both the square-root behaviour at the
vertex and the algebraic growth at infinity on uniform Gauss-Legendre panels.
Writing ``omega~ = s*omega`` with ``s = -1`` (so that ``u~ = s*w`` increases
along the contour) the integral becomes
``(1/2 pi) int phi(u~) (omega~ - omega~0) / ((u~ - omega~)(u~ - omega~0)) du~``
with ``phi = Im log G`` tracked continuously.  The kernel integrates in closed
form, which gives the tail beyond the last node and a singularity
subtraction for points whose image is close to the contour.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ArgTrackingFailed,
    DivisionNearZero,
    KernelZero,
    NumericalError,
    OutsideDomain,
    PoleAtX1,
    PoleAtZero,
)
from .gluing import gluing_context
from .kernel import (
    branch_Y,
    hyperbola_xy,
    hyperbola_y_of,
    in_G,
    kernel_eval,
    special_points,
)
from .model import classify, wedge_geometry

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class BvpTolerances:
    """Discretization controls for :func:`build_contour`.

    Attributes
    ----------
    panel_width : float
        Width of the Gauss-Legendre panels in ``v = log(y - y+)``.
    v_lo, v_hi : float
        Node range relative to the scale ``y+ - y-``, as decades.
    near : float
        Estimated distance in the ``v`` plane below which the singularity
        subtraction is used.
    rtol : float
        Target relative accuracy of psi1.
    """

    panel_width: float = 0.5
    v_lo: float = -13.0
    v_hi: float = 10.0
    near: float = 1.0
    rtol: float = 1e-9
    max_depth: int = 60


@dataclass
class ContourDiscretization:
    """Quadrature nodes on ``H+`` with the tracked argument of ``G``.

    ``phi`` is ``Im log G`` along the nodes, continuous and starting at ``d``;
    ``u`` holds the flipped images ``u~ = -w(x)`` (increasing), ``weight``
    the quadrature weights in ``u~``.
    """

    y: np.ndarray
    v: np.ndarray
    x: np.ndarray
    dx_dy: np.ndarray
    phi: np.ndarray
    dphi_dv: np.ndarray
    u: np.ndarray
    du_dv: np.ndarray
    weight: np.ndarray
    y_max: float
    u_start: float
    phi_start: float
    phi_inf: float
    d: float
    d_plus_Delta: float
    kappa: int
    tail_bound: float
    side_plus: int
    refinements: int = 0

    @property
    def logG(self):
        return 1j * self.phi


def _G_parts(x, y, params):
    _, k1, k2 = kernel_eval(x, y, params)
    _, k1c, k2c = kernel_eval(np.conj(x), y, params)
    return k1, k2, k1c, k2c


def G_eval(x, params, y=None):
    """Boundary function ``G(x) = (k1/k2)(x, Y+(x)) * (k2/k1)(conj x, Y+(x))``.

    Parameters
    ----------
    x : complex or array_like
        Points of the hyperbola.
    y : array_like, optional
        ``Y+(x)`` if already known (the hyperbola parameter); computed with
        the principal branch otherwise.
    """
    x = np.asarray(x, dtype=complex)
    if y is None:
        y = branch_Y(x, 1, params, side=1)
    k1, k2, k1c, k2c = _G_parts(x, y, params)
    if np.any(np.abs(k1c) < 1e-13):
        raise DivisionNearZero("k1(conj x, Y+(x)) vanishes on the contour",
                               quantity="k1")
    G = np.asarray((k1 / k2) * (k2c / k1c))
    return complex(G) if G.ndim == 0 else G


def _phi_raw(y, params, yp, ym):
    """Principal argument of G at hyperbola parameter ``y`` (vectorized)."""
    x, dx = hyperbola_xy(y, params, yp, ym)
    k1, k2, k1c, k2c = _G_parts(x, y, params)
    return np.angle((k1 * k2c) / (k2 * k1c)), x, dx, k1, k2


def _dphi_dv(y, x, dx, k1, k2, params, yp):
    p = params
    dk1 = (0.5 * p.r2 + p.rho) * dx + 0.5
    dk2 = 0.5 * dx + 0.5 * p.r1 + p.rho
    return 2 * np.imag(dk1 / k1 - dk2 / k2) * (y - yp)


def _limit_G(params, beta):
    """Limit of ``G`` along ``H+`` as ``y -> inf``."""
    p = params
    e = complex(math.cos(beta), math.sin(beta))
    k1 = 0.5 * ((p.r2 + 2 * p.rho) * e + 1)
    k2 = 0.5 * (e + p.r1 + 2 * p.rho)
    return (k1 / k2) * (np.conj(k2) / np.conj(k1))


def _wrap(a):
    return (a + math.pi) % (2 * math.pi) - math.pi


def build_contour(params, tolerances=None, geometry=None, glue=None, kdata=None):
    """Discretize ``H+`` and track the argument of ``G`` along it.

    Returns
    -------
    ContourDiscretization

    Raises
    ------
    ArgTrackingFailed
        If consecutive nodes cannot be brought within an argument step of
        ``pi/2`` by bisection.
    """
    tol = tolerances or BvpTolerances()
    g = geometry or wedge_geometry(params)
    glue = glue or gluing_context(params, g)
    kd = kdata or special_points(params)
    yp, ym = kd.y_plus, kd.y_minus
    scale = yp - ym

    # keep the largest image below overflow range
    v_hi_cap = (600.0 / glue.a) / math.log(10) - 1.0
    v_hi = min(tol.v_hi, v_hi_cap)
    v0 = math.log(scale) + tol.v_lo * math.log(10)
    v1 = math.log(scale) + v_hi * math.log(10)
    n_pan = int(math.ceil((v1 - v0) / tol.panel_width))
    edges = np.linspace(v0, v1, n_pan + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    v = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wv = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()

    y = yp + np.exp(v)
    ang, x, dx, k1, k2 = _phi_raw(y, params, yp, ym)
    if np.any(np.abs(k1) < 1e-13):
        raise DivisionNearZero("k1 vanishes at a contour node", quantity="k1")

    # continuous tracking; refine any step that looks too large
    steps = _wrap(np.diff(ang))
    refinements = 0
    for k in np.nonzero(np.abs(steps) > math.pi / 2)[0]:
        lo, hi = v[k], v[k + 1]
        sub = np.linspace(lo, hi, 65)
        a_sub = _phi_raw(yp + np.exp(sub), params, yp, ym)[0]
        s_sub = _wrap(np.diff(a_sub))
        refinements += 1
        if np.any(np.abs(s_sub) > math.pi / 2):
            raise ArgTrackingFailed(
                f"argument of G jumps on y in [{yp + math.exp(lo)}, {yp + math.exp(hi)}]",
                quantity="arg G")
        steps[k] = s_sub.sum()

    phi_start = float(ang[0])
    d = math.pi if abs(abs(phi_start) - math.pi) < 0.25 else 0.0
    phi = np.concatenate([[0.0], np.cumsum(steps)]) + (phi_start - (
        math.copysign(d, phi_start) if d else 0.0)) + d
    dphi = _dphi_dv(y, x, dx, k1, k2, params, yp)

    G_inf = _limit_G(params, g.beta)
    phi_inf = float(phi[-1] + _wrap(np.angle(G_inf) - ang[-1]))
    d_plus_Delta = phi_inf
    kappa = int(math.floor(d_plus_Delta / (2 * math.pi) + 1e-9))

    # images in the flipped variable u~ = -w, increasing along the contour
    w = glue.w(x, check=False)
    wp = glue.w_prime(x, check=False)
    du_dy = -wp * dx
    if np.any(np.abs(du_dy.imag) > 1e-6 * np.abs(du_dy)):
        raise NumericalError("image of the contour is not real", quantity="w")
    u = -w.real
    du_dv = du_dy.real * np.exp(v)
    if np.any(du_dv <= 0):
        raise NumericalError("image of the contour is not monotone", quantity="w")
    weight = wv * du_dv

    # direction of the image of G near H+: Im w~ sign just right of the contour
    probe = x[len(x) // 2] + 1e-7 * abs(x[len(x) // 2])
    side_plus = int(np.sign(-glue.w(probe).imag)) or 1

    tail = abs(phi_inf - phi[-1])
    return ContourDiscretization(
        y=y, v=v, x=x, dx_dy=dx, phi=phi, dphi_dv=dphi, u=u, du_dv=du_dv,
        weight=weight, y_max=float(y[-1]), u_start=-glue.w_at_branch.real,
        phi_start=float(phi[0]), phi_inf=phi_inf, d=d,
        d_plus_Delta=d_plus_Delta, kappa=kappa, tail_bound=tail,
        side_plus=side_plus, refinements=refinements)


def _log_side(z, side):
    """Principal log, with the limit from ``Im z -> 0`` of sign ``side`` on the cut."""
    out = np.log(z)
    on = (z.imag == 0) & (z.real < 0) & (side != 0)
    if np.any(on):
        out = np.where(on, np.log(np.abs(z)) + 1j * math.pi * np.where(side > 0, 1, -1), out)
    return out


class Psi1Evaluator:
    """Evaluate ``psi1`` at complex points.

    Parameters
    ----------
    params : ModelParams
    tolerances : BvpTolerances, optional

    Notes
    -----
    For correlations ``rho < 0`` the hyperbola opens to the right and part
    of the half plane ``Re x > 0`` lies outside ``G``.  Such points are
    reached by the reflection ``x -> xi`` across the ellipse
    (``K(x, y*) = K(xi, y*) = 0`` with ``y* = Y+(x)``), for which the
    functional equation gives
    ``psi1(x) = psi1(xi) k1(xi,y*) k2(x,y*) / (k2(xi,y*) k1(x,y*))``.
    """

    def __init__(self, params, tolerances=None):
        self.params = params
        self.tolerances = tolerances or BvpTolerances()
        self.geometry = wedge_geometry(params)
        self.classification = classify(params, self.geometry)
        self.kernel = special_points(params)
        self.glue = gluing_context(params, self.geometry)
        self.contour = build_contour(params, self.tolerances, self.geometry,
                                     self.glue, self.kernel)
        c = self.contour
        self._chi = self.classification.chi
        self._w0 = self.glue.w_at_0.real
        self._wp0 = complex(self.glue.w_prime(0.0))
        self.normalization = self._wp0
        if self._chi == -1:
            self._w1 = self.glue.w(self.kernel.x1).real
        self._u_end = float(c.u[-1])
        self._scale = self.kernel.y_plus - self.kernel.y_minus
        # log(u~ - u~s) is a smooth monotone coordinate for locating v*
        self._lu = np.log(c.u - c.u_start)

    # ------------------------------------------------------------------
    # contour helpers; all accept complex v for analytic continuation
    def _curve(self, v):
        kd, p = self.kernel, self.params
        v = np.asarray(v, dtype=complex)
        ev = np.exp(v)
        y = kd.y_plus + ev
        c = math.sqrt(1 - p.rho ** 2)
        sq = np.sqrt(ev * (y - kd.y_minus))
        centre = -(p.rho * y + p.mu1)
        x = centre + 1j * c * sq
        xb = centre - 1j * c * sq
        dx = -p.rho + 1j * c * (2 * y - kd.y_plus - kd.y_minus) / (2 * sq)
        return y, x, xb, dx, ev

    def _u_of_v(self, v):
        y, x, xb, dx, ev = self._curve(v)
        u = -self.glue.w(x, check=False)
        du = -self.glue.w_prime(x, check=False) * dx * ev
        return u, du

    def _phi_at(self, v):
        """Continuation of ``phi = -i log G`` to complex ``v``.

        The branch is the one of the tracked nodal values at ``Re v``.
        """
        p = self.params
        y, x, xb, dx, ev = self._curve(v)
        _, k1, k2 = kernel_eval(x, y, p)
        _, k1b, k2b = kernel_eval(xb, y, p)
        G = (k1 / k2) * (k2b / k1b)
        ref = np.interp(np.real(v), self.contour.v, self.contour.phi)
        return ref - 1j * np.log(G * np.exp(-1j * ref))

    def _locate(self, ot):
        """Solve ``u~(v) = ot`` for complex ``v`` near the real axis.

        Returns the root and ``du~/dv`` there.
        """
        c = self.contour
        t = np.log(ot.real - c.u_start)
        v = np.interp(t, self._lu, c.v, left=np.nan, right=np.nan)
        lo = np.isnan(v) & (t < self._lu[0])
        hi = np.isnan(v) & ~lo
        v = np.where(lo, c.v[0] + (t - self._lu[0]), v)
        slope_hi = (self._lu[-1] - self._lu[-17]) / (c.v[-1] - c.v[-17])
        v = np.where(hi, c.v[-1] + (t - self._lu[-1]) / slope_hi, v).astype(complex)
        target = np.log(ot - c.u_start)
        # Newton on log(u~ - u~s), which is close to linear in v
        for _ in range(40):
            u, du = self._u_of_v(v)
            step = (np.log(u - c.u_start) - target) / (du / (u - c.u_start))
            v = v - step
            if np.all(np.abs(step) < 1e-14 * (1 + np.abs(v))):
                break
        u, du = self._u_of_v(v)
        return v, du

    # ------------------------------------------------------------------
    def _integral(self, ot, side):
        """``I`` at flipped images ``ot = -w(x)`` of points in G or on H."""
        c = self.contour
        ot0 = -self._w0
        # points on the image of the contour get an explicit side
        on_line = (ot.imag == 0) & (ot.real > c.u_start)
        sgn = np.where(on_line, side, np.sign(ot.imag))

        # singularity subtraction at the continued root u~(v*) = ot
        phis = np.zeros(ot.shape, dtype=complex)
        cand = np.nonzero(ot.real > c.u_start)[0]
        if cand.size:
            guess = np.abs(ot.imag[cand]) / np.interp(
                np.log(ot.real[cand] - c.u_start), self._lu, c.du_dv)
            cand = cand[guess < 4 * self.tolerances.near]
        if cand.size:
            vc, _ = self._locate(ot[cand])
            ok = np.abs(vc.imag) < self.tolerances.near
            idx = cand[ok]
            if idx.size:
                phis[idx] = self._phi_at(vc[ok])

        out = np.empty(ot.shape, dtype=complex)
        chunk = 512
        for s in range(0, ot.size, chunk):
            sl = slice(s, s + chunk)
            o = ot[sl][:, None]
            num = c.phi[None, :] - phis[sl][:, None]
            den = c.u[None, :] - o
            with np.errstate(divide="ignore", invalid="ignore"):
                terms = num * (o - ot0) / (den * (c.u[None, :] - ot0))
            # exact coincidence with a node: use the limit of the quotient
            hit = den == 0
            if np.any(hit):
                lim = (c.dphi_dv[None, :] / c.du_dv[None, :]) * (o - ot0) / (
                    c.u[None, :] - ot0)
                terms = np.where(hit, lim, terms)
            out[sl] = terms @ c.weight
        # closed-form pieces: constant phi* over the whole half line, the
        # tail beyond the last node (phi ~ phi_inf) and the short initial
        # piece before the first node (phi ~ d)
        def L(a, sd):
            return _log_side(a - ot, sd) - _log_side(a - ot0 + 0j, 0)

        J = -L(c.u_start, -sgn)
        Tm = -L(self._u_end, -sgn)
        S = L(c.u[0], -sgn) - L(c.u_start, -sgn)
        out += (c.phi_inf - phis) * Tm + phis * J + (c.d - phis) * S
        return out / (2 * math.pi)

    def _eval_inside(self, x, side, snap=None):
        om = np.asarray(self.glue.w(x, check=False), dtype=complex)
        if snap is not None:
            om = np.where(snap, om.real + 0j, om)
        den = om - self._w0
        if np.any(np.abs(den) < 1e-13 * (1 + np.abs(om))):
            raise PoleAtZero("psi1 has a pole at x = 0", quantity="x")
        val = self._wp0 / den
        if self._chi == -1:
            d1 = om - self._w1
            if np.any(np.abs(d1) < 1e-13 * (1 + np.abs(om))):
                raise PoleAtX1("psi1 has a pole at x1", quantity="x")
            val = val * ((self._w0 - self._w1) / d1)
        return val * np.exp(self._integral(-om, side))

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x, on_contour=False):
        """``psi1`` at ``x`` (scalar or array).

        Parameters
        ----------
        x : complex or array_like
        on_contour : bool
            Treat points of ``H`` as limits from inside ``G``.
        """
        xa = np.atleast_1d(np.asarray(x, dtype=complex)).ravel()
        p = self.params
        if np.any(xa == 0):
            raise PoleAtZero("psi1 has a pole at x = 0", quantity="x")
        out = np.empty(xa.shape, dtype=complex)
        yh = hyperbola_y_of(xa, p)
        gap = xa.real + (p.rho * yh + p.mu1)
        tol_on = 1e-9 * (1 + np.abs(xa))
        on = np.abs(gap) <= tol_on if on_contour else np.zeros(xa.shape, bool)
        inside = (gap > 0) | on
        side = np.where(np.imag(xa) >= 0, self.contour.side_plus,
                        -self.contour.side_plus)
        if np.any(inside):
            out[inside] = self._eval_inside(xa[inside], side[inside], on[inside])
        rest = ~inside
        if np.any(rest):
            if np.any(xa[rest].real <= 0):
                bad = xa[rest][xa[rest].real <= 0][0]
                raise OutsideDomain(
                    f"x = {bad} lies left of the hyperbola with Re x <= 0",
                    quantity="x")
            out[rest] = self._continue(xa[rest])
        if np.ndim(x) == 0:
            return complex(out[0])
        return out.reshape(np.shape(x))

    def _continue(self, x):
        """Reach points of ``Re x > 0`` outside G by repeated reflection."""
        p = self.params
        cur = np.array(x, dtype=complex)
        factor = np.ones(cur.shape, dtype=complex)
        result = np.empty(cur.shape, dtype=complex)
        pending = np.arange(cur.size)
        for _ in range(self.tolerances.max_depth):
            c = cur[pending]
            ys = branch_Y(c, 1, p)
            xi = -2 * (p.rho * ys + p.mu1) - c
            _, k1x, k2x = kernel_eval(c, ys, p)
            _, k1s, k2s = kernel_eval(xi, ys, p)
            if np.any(np.abs(k1x * k2s) == 0):
                raise KernelZero("k1 vanishes on the continuation path",
                                 quantity="k1")
            factor[pending] *= k1s * k2x / (k2s * k1x)
            cur[pending] = xi
            inside = np.asarray(in_G(xi, p))
            if np.any(inside):
                idx = pending[inside]
                result[idx] = factor[idx] * self._eval_inside(
                    cur[idx], np.ones(idx.size))
            pending = pending[~inside]
            if pending.size == 0:
                return result
            if np.any(cur[pending].real <= 0):
                raise OutsideDomain("continuation left the half plane Re x > 0",
                                    quantity="x")
        raise OutsideDomain("continuation did not reach the domain G",
                            quantity="x")


@dataclass
class PsiEvaluators:
    """``psi1`` and ``psi2`` evaluators of one parameter set."""

    params: object
    psi1: Psi1Evaluator
    psi2: Psi1Evaluator = field(repr=False)


def build_evaluators(params, tolerances=None):
    """Build the ``psi1`` evaluator and the mirrored one for ``psi2``."""
    e1 = Psi1Evaluator(params, tolerances)
    e2 = Psi1Evaluator(params.swapped(), tolerances)
    return PsiEvaluators(params, e1, e2)


def psi1_eval(x, evaluator):
    """``psi1(x)`` via a :class:`Psi1Evaluator`."""
    return evaluator.evaluate(x)


def psi2_eval(y, evaluator2):
    """``psi2(y)``: ``psi1`` of the mirrored parameters (``evaluator2``)."""
    return evaluator2.evaluate(y)


def psi_eval(x, y, evaluators, ktol=1e-12):
    """Bivariate transform ``psi(x, y) = (k1 psi1(x) + k2 psi2(y)) / K``."""
    p = evaluators.params
    K, k1, k2 = kernel_eval(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex), p)
    if np.any(np.abs(K) <= ktol):
        raise KernelZero("K(x, y) vanishes at the requested point", quantity="K")
    val = (k1 * evaluators.psi1.evaluate(x) + k2 * evaluators.psi2.evaluate(y)) / K
    return complex(val) if np.ndim(val) == 0 else val
