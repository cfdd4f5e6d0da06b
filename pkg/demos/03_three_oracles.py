"""Inversion, Monte Carlo and finite differences side by side.

The simulator and the PDE solver share nothing with the transform route, so
agreement within their error bars checks the analytic pipeline end to end.
Path counts are kept small here; the acceptance suite uses 1e5 paths.
"""

import numpy as np

from quadescape import QuadrantSolver, validate_params
from quadescape.oracles import McConfig, PdeConfig, mc_escape_prob, pde_solve

p = validate_params(2.0, 3.0, -0.4, 2.0, 4.0)
s = QuadrantSolver(p)
cfg = McConfig(n_paths=20_000, dt=1e-3, seed=1)

print("start          inversion   Monte Carlo (+- 3 se + bias)")
for u, v in ((0.5, 0.0), (0.25, 0.25), (1.0, 1.0)):
    ref = s.escape_prob_axis(u) if v == 0 else s.escape_prob_interior(u, v)
    e = mc_escape_prob((u, v), p, cfg)
    band = 3 * e.std_err + e.bias_bound
    print(f"({u:4.2f}, {v:4.2f})   {ref:.5f}     {e.p_escape_hat:.5f} +- {band:.5f}")

grid = pde_solve(p, PdeConfig(n=300))
uu = np.linspace(0.1, grid.L / 3, 6)
axis_u, axis_f = grid.axis("horizontal")
diff = np.abs(np.interp(uu, axis_u, axis_f) - s.absorption_prob_axis(uu))
print(f"\nPDE on [0, {grid.L:.1f}]^2, axis difference to inversion: max {diff.max():.2e}")
