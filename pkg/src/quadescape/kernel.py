"""Kernel algebra: the quadratic kernel, its branches and special points.

``K(x, y) = (x**2 + y**2 + 2 rho x y)/2 + mu1 x + mu2 y`` vanishes on an
ellipse through the origin.  Solving ``K = 0`` for one variable gives the
two-valued algebraic functions ``X(y)`` and ``Y(x)`` whose real branch points
``x-, x+`` and ``y-, y+`` bound the cuts.  For ``y >= y+`` the pair
``X(y)`` traces the hyperbola ``H``; its upper half ``H+`` is the contour of
the boundary value problem.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import OnBranchCut
from .model import STRUCT_TOL

_CUT_BAND = 1e-14


@dataclass(frozen=True)
class KernelData:
    """Branch points and special points of the kernel.

    ``x1`` is the nonzero abscissa where the line ``k1 = 0`` meets the
    ellipse ``K = 0``, with ordinate ``y1``; ``(x2, y2)`` is the analogous
    point on ``k2 = 0``.  ``y_tilde`` is ``nan`` when undefined.
    """

    x_plus: float
    x_minus: float
    y_plus: float
    y_minus: float
    x0: float
    y0: float
    x1: float
    y1: float
    x2: float
    y2: float
    y_tilde: float

    def as_dict(self):
        return {k: (None if isinstance(v, float) and math.isnan(v) else v)
                for k, v in asdict(self).items()}


@dataclass(frozen=True)
class HyperbolaPoint:
    """Point ``x = X(y)`` on the upper branch ``H+`` and its derivative."""

    y: float
    x: complex
    dx_dy: complex


def kernel_eval(x, y, params):
    """Return ``(K, k1, k2)`` at ``(x, y)``; broadcasts over arrays."""
    p = params
    x = np.asarray(x)
    y = np.asarray(y)
    K = 0.5 * (x * x + y * y + 2 * p.rho * x * y) + p.mu1 * x + p.mu2 * y
    k1 = 0.5 * (p.r2 * x + y) + p.rho * x + p.mu2
    k2 = 0.5 * (x + p.r1 * y) + p.rho * y + p.mu1
    if K.ndim == 0:
        return complex(K), complex(k1), complex(k2)
    return K, k1, k2


def _stable_roots(a, b, c):
    """Real roots (r_plus, r_minus) of ``a t**2 - 2 b t - c`` with a, c > 0.

    Written as ``t = (b +- sqrt(b**2 + a c))/a``; the root computed by
    addition is obtained from the product ``-c/a`` to avoid cancellation.
    """
    s = math.sqrt(b * b + a * c)
    if b >= 0:
        tp = (b + s) / a
        tm = -c / (a * tp)
    else:
        tm = (b - s) / a
        tp = -c / (a * tm)
    return tp, tm


def branch_points(params):
    """Branch points ``(x_plus, x_minus, y_plus, y_minus)``."""
    p = params
    a = 1.0 - p.rho ** 2
    yp, ym = _stable_roots(a, p.mu1 * p.rho - p.mu2, p.mu1 ** 2)
    xp, xm = _stable_roots(a, p.mu2 * p.rho - p.mu1, p.mu2 ** 2)
    return xp, xm, yp, ym


def disc_X(y, params):
    """Discriminant under the square root of ``X(y)``."""
    p = params
    return y * y * (p.rho ** 2 - 1) + 2 * y * (p.mu1 * p.rho - p.mu2) + p.mu1 ** 2


def disc_Y(x, params):
    """Discriminant under the square root of ``Y(x)``."""
    p = params
    return x * x * (p.rho ** 2 - 1) + 2 * x * (p.mu2 * p.rho - p.mu1) + p.mu2 ** 2


def _branch(t, sign, side, centre, disc, ddisc):
    t = np.asarray(t, dtype=complex)
    D = disc(t)
    on_cut = (np.abs(D.imag) <= _CUT_BAND * (1 + np.abs(D))) & (D.real < 0)
    root = np.sqrt(D)
    if np.any(on_cut):
        if side is None:
            bad = t[on_cut].ravel()[0] if t.ndim else t
            raise OnBranchCut(f"argument {complex(bad)} lies on a branch cut",
                              quantity="discriminant")
        # one-sided limit: Im t -> 0 from the side `side`, so that
        # Im D -> 0 with the sign of side * D'(t)
        direction = np.sign(side * ddisc(t.real))
        lim = 1j * direction * np.sqrt(-D.real)
        root = np.where(on_cut, lim, root)
    val = centre(t) + sign * root
    return complex(val) if val.ndim == 0 else val


def branch_Y(x, sign, params, side=None):
    """``Y+(x)`` (``sign=+1``) or ``Y-(x)`` (``sign=-1``).

    Uses the principal square root, analytic off the cuts
    ``(-inf, x-] U [x+, inf)``.  On a cut, pass ``side=+1`` (or ``-1``)
    for the limit from the upper (lower) half plane; otherwise
    :class:`OnBranchCut` is raised.
    """
    p = params
    return _branch(
        x, sign, side,
        lambda t: -(p.rho * t + p.mu2),
        lambda t: disc_Y(t, p),
        lambda t: 2 * t * (p.rho ** 2 - 1) + 2 * (p.mu2 * p.rho - p.mu1))


def branch_X(y, sign, params, side=None):
    """``X+(y)`` or ``X-(y)``; see :func:`branch_Y`."""
    p = params
    return _branch(
        y, sign, side,
        lambda t: -(p.rho * t + p.mu1),
        lambda t: disc_X(t, p),
        lambda t: 2 * t * (p.rho ** 2 - 1) + 2 * (p.mu1 * p.rho - p.mu2))


def hyperbola_xy(y, params, yp=None, ym=None):
    """Vectorized ``H+`` parametrization: ``x(y)`` and ``dx/dy`` for y >= y+.

    The discriminant is used in factored form ``-(1-rho**2)(y-y+)(y-y-)``,
    which keeps full relative accuracy next to the branch point.
    """
    p = params
    if yp is None:
        _, _, yp, ym = branch_points(p)
    y = np.asarray(y, dtype=float)
    c = math.sqrt(1 - p.rho ** 2)
    dp = y - yp
    dm = y - ym
    prod = dp * dm
    s = np.sqrt(np.maximum(prod, 0.0))
    x = -(p.rho * y + p.mu1) + 1j * c * s
    with np.errstate(divide="ignore", invalid="ignore"):
        dim = np.where(s > 0, c * (dp + dm) / (2 * s), np.inf)
    dx = np.empty(np.shape(y), dtype=complex)
    dx.real = -p.rho
    dx.imag = dim
    return x, dx


def hyperbola_point(y, params):
    """Point of ``H+`` with parameter ``y >= y+`` (non-negative imaginary part)."""
    x, dx = hyperbola_xy(float(y), params)
    return HyperbolaPoint(float(y), complex(x), complex(dx))


def hyperbola_residual(x, params):
    """Residual of the real equation of the hyperbola at complex ``x``.

    With ``x = a + i b`` the points of ``H`` satisfy
    ``(rho**2 - 1) a**2 + rho**2 b**2 - 2 (mu1 - rho mu2) a
    = mu1 (mu1 - 2 rho mu2)``.
    """
    p = params
    x = np.asarray(x, dtype=complex)
    a, b = x.real, x.imag
    return ((p.rho ** 2 - 1) * a * a + p.rho ** 2 * b * b
            - 2 * (p.mu1 - p.rho * p.mu2) * a - p.mu1 * (p.mu1 - 2 * p.rho * p.mu2))


def hyperbola_y_of(x, params):
    """Parameter ``y >= y+`` of the hyperbola point with imaginary part ``|Im x|``.

    Solves ``(1 - rho**2)(y - y+)(y - y-) = (Im x)**2`` for its larger root.
    """
    p = params
    _, _, yp, ym = branch_points(p)
    a = 1 - p.rho ** 2
    b2 = np.abs(np.asarray(x, dtype=complex).imag) ** 2 / a
    # (y - yp)(y - ym) = b2 -> t = y - yp solves t**2 + (yp - ym) t - b2 = 0
    w = yp - ym
    t = 2 * b2 / (w + np.sqrt(w * w + 4 * b2))
    return yp + t


def in_G(x, params):
    """True where ``x`` lies strictly to the right of the hyperbola ``H``."""
    p = params
    x = np.asarray(x, dtype=complex)
    y = hyperbola_y_of(x, p)
    return x.real > -(p.rho * y + p.mu1)


def special_points(params):
    """Compute :class:`KernelData` for ``params``."""
    p = params
    xp, xm, yp, ym = branch_points(p)
    x0 = -2.0 * p.mu1
    y0 = -2.0 * p.mu2
    x1 = -2.0 * (p.r2 * p.mu2 + p.mu1) / (1 + p.r2 ** 2 + 2 * p.rho * p.r2)
    y2 = -2.0 * (p.r1 * p.mu1 + p.mu2) / (1 + p.r1 ** 2 + 2 * p.rho * p.r1)
    # companions on the lines k1 = 0 and k2 = 0
    y1 = -(p.r2 + 2 * p.rho) * x1 - 2 * p.mu2
    x2 = -(p.r1 + 2 * p.rho) * y2 - 2 * p.mu1
    den = (p.r1 + 2 * p.rho) * (p.r2 + 2 * p.rho) - 1
    if abs(den) <= STRUCT_TOL:
        yt = math.nan
    else:
        yt = 2 * (p.mu2 - p.mu1 * (p.r2 + 2 * p.rho)) / den
    return KernelData(xp, xm, yp, ym, x0, y0, x1, y1, x2, y2, yt)
