"""Explicit upper bounds on the absorption probability far from the corner.

From a start ``(u, v)`` the process escapes with probability at least
``1 - exp(-u mu1) - exp(-(u/r2 + 2 v) mu2)`` (compare the first coordinate
with a drifted Brownian motion started at ``u/2``) and symmetrically
``1 - exp(-v mu2) - exp(-(v/r1 + 2 u) mu1)``.  These bound the error made by
declaring escape on a circle or by imposing ``f = 0`` on a far boundary.
"""

import numpy as np
from scipy.optimize import brentq


def absorption_upper_bound(params, u, v):
    """Upper bound on ``P_{(u,v)}[T < inf]`` (vectorized, clipped at 1)."""
    p = params
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    b1 = np.exp(-u * p.mu1) + np.exp(-(u / p.r2 + 2 * v) * p.mu2)
    b2 = np.exp(-v * p.mu2) + np.exp(-(v / p.r1 + 2 * u) * p.mu1)
    return np.minimum(1.0, np.minimum(b1, b2))


def escape_bias_bound(params, R, n=4001):
    """Largest absorption bound over the quarter circle of radius ``R``.

    A path stopped on that circle and counted as escaped would have been
    absorbed later with probability at most this value.
    """
    t = np.linspace(0.0, np.pi / 2, n)
    b = absorption_upper_bound(params, R * np.cos(t), R * np.sin(t))
    k = int(np.argmax(b))
    lo, hi = t[max(k - 1, 0)], t[min(k + 1, n - 1)]
    tt = np.linspace(lo, hi, 201)
    return float(max(b[k], absorption_upper_bound(params, R * np.cos(tt), R * np.sin(tt)).max()))


def square_bias_bound(params, L, n=4001):
    """Largest absorption bound on the far edges of ``[0, L]**2``."""
    s = np.linspace(0.0, L, n)
    return float(max(absorption_upper_bound(params, L, s).max(),
                     absorption_upper_bound(params, s, L).max()))


def choose_escape_radius(params, tol=1e-4):
    """Smallest radius whose :func:`escape_bias_bound` is at most ``tol``."""
    hi = 1.0 / min(params.mu1, params.mu2)
    while escape_bias_bound(params, hi) > tol:
        hi *= 2
    lo = hi / 2 if escape_bias_bound(params, hi / 2) > tol else 0.0
    if lo == 0.0:
        return hi
    R = brentq(lambda r: escape_bias_bound(params, r) - tol, lo, hi, xtol=1e-6)
    # move just above the root so the bound holds
    while escape_bias_bound(params, R) > tol:
        R *= 1 + 1e-6
    return float(R)
