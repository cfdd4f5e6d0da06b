"""Escape probability along the horizontal axis for one correlated example.

Start from the model parameters, look at the wedge geometry and the index
classification, then invert the transform and compare the tail with its
predicted exponential rate.
"""

import numpy as np

from quadescape import (QuadrantSolver, classify, fit_rate, special_points,
                        validate_params, wedge_geometry)

p = validate_params(mu1=2.0, mu2=3.0, rho=-0.4, r1=2.0, r2=4.0)
g = wedge_geometry(p)
c = classify(p, g)
print(f"wedge angle beta = {g.beta:.6f}, corner exponent alpha = {g.alpha:.6f}")
print(f"chi = {c.chi}, kappa = {c.kappa}, horizontal regime {c.axis_asymptotic_regime_h.value}")

s = QuadrantSolver(p)
u = np.array([0.01, 0.1, 0.5, 1, 2, 4])
pa, pe = s.axis_probabilities(u)
print("\n     u    P[absorbed]   P[escape]")
for ui, a, e in zip(u, pa, pe):
    print(f"{ui:6.2f}   {a:.6e}   {e:.6e}")

# near the corner the escape probability vanishes like u**alpha
small = np.logspace(-3, -2, 6)
slope = np.polyfit(np.log(small), np.log(s.escape_prob_axis(small)), 1)[0]
print(f"\nlog-log slope near the corner {slope:.4f} (alpha = {g.alpha:.4f})")

# far away the absorption probability decays like exp(x1 u)
tail = np.linspace(2, 6, 9)
print(f"tail rate {fit_rate(tail, s.absorption_prob_axis(tail)):.6f} "
      f"(pole x1 = {special_points(p).x1:.6f})")
