"""Finite-difference solver for the absorption probability.

``f(u, v) = P_{(u,v)}[T < inf]`` solves

    (f_uu + f_vv + 2 rho f_uv) / 2 + mu1 f_u + mu2 f_v = 0

in the quadrant, with the oblique Neumann conditions ``f_u - r1 f_v = 0`` on
``u = 0`` and ``-r2 f_u + f_v = 0`` on ``v = 0``, ``f(0, 0) = 1`` and
``f -> 0`` at infinity.  The quadrant is truncated to ``[0, L]**2`` with
``f = 0`` on the far edges.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import SolverDiverged
from .bounds import square_bias_bound


@dataclass(frozen=True)
class PdeConfig:
    """Grid for :func:`pde_solve`.

    ``L`` defaults to ``10 * max(1/mu1, 1/mu2)`` and ``n`` (cells per side)
    to 400.
    """

    L: float = None
    n: int = 400


@dataclass
class PdeGrid:
    """Solution on the grid ``u = v = linspace(0, L, n + 1)``.

    ``f[i, j]`` is the value at ``(u[i], v[j])``.  ``far_bias`` bounds the
    effect of the far-edge condition: the absorption probability from any
    point of the far boundary is at most this value.
    """

    L: float
    h: float
    u: np.ndarray
    f: np.ndarray
    far_bias: float
    residual: float

    @property
    def v(self):
        return self.u

    def axis(self, which="horizontal"):
        """Values along an axis: ``(coordinate, f)``."""
        if str(which).startswith("h"):
            return self.u, self.f[:, 0]
        return self.u, self.f[0, :]

    def interp(self, u, v):
        """Bilinear interpolation of ``f`` at ``(u, v)``."""
        from scipy.interpolate import RegularGridInterpolator
        it = RegularGridInterpolator((self.u, self.u), self.f)
        pts = np.column_stack([np.ravel(u), np.ravel(v)])
        return it(pts).reshape(np.shape(u))


def pde_solve(params, config=None):
    """Solve the boundary value problem for the absorption probability.

    Raises
    ------
    ValueError
        If ``L < 10 max(1/mu1, 1/mu2)`` or ``n < 200``.
    SolverDiverged
        If the sparse solve fails, returns a non-finite field or leaves a
        linear residual above ``1e-10``.
    """
    cfg = config or PdeConfig()
    p = params
    L_min = 10.0 * max(1 / p.mu1, 1 / p.mu2)
    L = cfg.L if cfg.L is not None else L_min
    n = int(cfg.n)
    if L < L_min * (1 - 1e-12):
        raise ValueError(f"L = {L} is below 10 max(1/mu1, 1/mu2) = {L_min}")
    if n < 200:
        raise ValueError("n must be at least 200 cells per side")
    h = L / n
    N = n + 1
    idx = np.arange(N * N).reshape(N, N)
    rows, cols, vals = [], [], []
    rhs = np.zeros(N * N)

    def add(r, c, val):
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(np.broadcast_to(val, r.shape).ravel().astype(float))

    # interior operator, multiplied by h**2
    I, J = np.meshgrid(np.arange(1, n), np.arange(1, n), indexing="ij")
    c = idx[I, J]
    a = abs(p.rho)
    s = 1.0 if p.rho >= 0 else -1.0
    # 1/2 (f_uu + f_vv) + rho f_uv with the cross term on the diagonal
    # pair aligned with the sign of rho (non-negative off-diagonals)
    add(c, c, -(2.0 - a))
    for di, dj, w in ((1, 0, 0.5 * (1 - a)), (-1, 0, 0.5 * (1 - a)),
                      (0, 1, 0.5 * (1 - a)), (0, -1, 0.5 * (1 - a))):
        add(c, idx[I + di, J + dj], w)
    add(c, idx[I + 1, J + int(s)], 0.5 * a)
    add(c, idx[I - 1, J - int(s)], 0.5 * a)
    # drift, central differences
    add(c, idx[I + 1, J], p.mu1 * h / 2)
    add(c, idx[I - 1, J], -p.mu1 * h / 2)
    add(c, idx[I, J + 1], p.mu2 * h / 2)
    add(c, idx[I, J - 1], -p.mu2 * h / 2)

    # u = 0: f_u - r1 f_v = 0, one-sided second order in u
    j = np.arange(1, n)
    c = idx[0, j]
    add(c, c, -3.0)
    add(c, idx[1, j], 4.0)
    add(c, idx[2, j], -1.0)
    add(c, idx[0, j + 1], -p.r1)
    add(c, idx[0, j - 1], p.r1)
    # v = 0: -r2 f_u + f_v = 0
    i = np.arange(1, n)
    c = idx[i, 0]
    add(c, c, -3.0)
    add(c, idx[i, 1], 4.0)
    add(c, idx[i, 2], -1.0)
    add(c, idx[i + 1, 0], -p.r2)
    add(c, idx[i - 1, 0], p.r2)

    # Dirichlet nodes: corner and far edges
    far = np.concatenate([idx[n, :], idx[:n, n]])
    add(far, far, 1.0)
    add(np.array([idx[0, 0]]), np.array([idx[0, 0]]), 1.0)
    rhs[idx[0, 0]] = 1.0

    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(N * N, N * N))
    try:
        f = spla.spsolve(A.tocsc(), rhs)
    except Exception as exc:  # noqa: BLE001 - scipy raises several types
        raise SolverDiverged(f"sparse solve failed: {exc}", quantity="f") from exc
    if not np.all(np.isfinite(f)):
        raise SolverDiverged("non-finite values in the solution", quantity="f")
    residual = float(np.max(np.abs(A @ f - rhs)))
    if residual > 1e-10:
        raise SolverDiverged(f"linear residual {residual:.3g}", quantity="residual")
    return PdeGrid(L=L, h=h, u=np.linspace(0, L, N), f=f.reshape(N, N),
                   far_bias=square_bias_bound(params, L), residual=residual)
