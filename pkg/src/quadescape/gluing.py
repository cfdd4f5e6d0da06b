"""Conformal gluing function for the domain bounded by the hyperbola.

The generalized Chebyshev function ``T_a(z) = cos(a arccos z)`` is continued
to ``C \\ (-inf, -1]`` as ``cosh(a Log q)`` with ``q = z + sqrt(z-1) sqrt(z+1)``.
Composed with the affine map sending ``[x-, x+]`` to ``[-1, 1]`` and
``a = pi/beta`` it gives ``w``, which takes equal real values at conjugate
points of the hyperbola.  The Moebius image
``W = (w - w(x_b)) / (w - w(0))`` sends the vertex ``x_b`` of the hyperbola
to 0.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import OnCut, PoleAtZero
from .kernel import branch_points, hyperbola_xy
from .model import wedge_geometry


def _log_q(z):
    z = np.asarray(z, dtype=complex)
    q = z + np.sqrt(z - 1) * np.sqrt(z + 1)
    return np.log(q)


def _check_cut(z):
    z = np.asarray(z, dtype=complex)
    bad = (z.imag == 0) & (z.real <= -1)
    if np.any(bad):
        raise OnCut(f"Chebyshev argument on (-inf, -1]: {complex(z[bad].ravel()[0])}",
                    quantity="z")


def chebyshev_T(a, z, check=True):
    """Generalized Chebyshev function ``T_a(z)`` on ``C \\ (-inf, -1]``.

    Parameters
    ----------
    a : float
        Positive order.
    z : complex or array_like
    check : bool
        Raise :class:`OnCut` for real ``z <= -1``.
    """
    if check:
        _check_cut(z)
    L = a * _log_q(z)
    # |q| >= 1 so Re L >= 0; drop the subdominant term when it is negligible
    big = L.real > 40
    with np.errstate(over="ignore"):
        val = np.where(big, 0.5 * np.exp(L), np.cosh(L))
    return complex(val) if val.ndim == 0 else val


def chebyshev_T_prime(a, z, check=True):
    """Derivative ``dT_a/dz = a sinh(a Log q) / sinh(Log q)``, limit ``a**2`` at 1."""
    if check:
        _check_cut(z)
    L = _log_q(z)
    small = np.abs(L) < 1e-8
    Ls = np.where(small, 1.0, L)
    with np.errstate(over="ignore"):
        ratio = np.where(L.real * a > 40,
                         np.exp(a * Ls) / np.where(Ls.real > 40, np.exp(Ls),
                                                    2 * np.sinh(Ls)),
                         np.sinh(a * Ls) / np.sinh(Ls))
    val = np.where(small, a * a * (1 + (a * a - 1) * L * L / 6), a * ratio)
    return complex(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class GluingContext:
    """Cached data for ``w`` and ``W``.

    ``w_at_branch`` is ``w`` at the vertex ``X(y+)`` of the hyperbola.
    """

    a: float
    x_plus: float
    x_minus: float
    w_at_0: complex
    w_at_branch: complex
    x_branch: float

    def z(self, x):
        return (2 * np.asarray(x, dtype=complex) - (self.x_plus + self.x_minus)) / (
            self.x_plus - self.x_minus)

    def w(self, x, check=True):
        return chebyshev_T(self.a, self.z(x), check=check)

    def w_prime(self, x, check=True):
        return chebyshev_T_prime(self.a, self.z(x), check=check) * 2 / (
            self.x_plus - self.x_minus)

    def W(self, x):
        wx = np.asarray(self.w(x))
        den = wx - self.w_at_0
        if np.any(np.abs(den) < 1e-13 * (1 + np.abs(wx))):
            raise PoleAtZero("W has a pole where w(x) = w(0)", quantity="x")
        val = (wx - self.w_at_branch) / den
        return complex(val) if val.ndim == 0 else val


def gluing_context(params, geometry=None):
    """Build the :class:`GluingContext` of ``params``."""
    g = geometry if geometry is not None else wedge_geometry(params)
    xp, xm, yp, ym = branch_points(params)
    a = math.pi / g.beta
    z0 = (-(xp + xm)) / (xp - xm)
    # z0 lies in (-1, 1) because x- < 0 < x+; the vertex maps to cos(beta)
    w0 = complex(math.cos(a * math.acos(z0)))
    xb = float(hyperbola_xy(yp, params, yp, ym)[0].real)
    zb = (2 * xb - (xp + xm)) / (xp - xm)
    wb = complex(math.cos(a * math.acos(min(1.0, max(-1.0, zb)))))
    return GluingContext(a, xp, xm, w0, wb, xb)


def w_eval(x, ctx):
    """``w(x)`` for the gluing context ``ctx``."""
    return ctx.w(x)


def w_prime(x, ctx):
    """Analytic derivative ``w'(x)``."""
    return ctx.w_prime(x)


def W_eval(x, ctx):
    """``W(x) = (w(x) - w(x_b)) / (w(x) - w(0))``."""
    return ctx.W(x)
