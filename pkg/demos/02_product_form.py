"""Product-form parameters: the contour pipeline against the closed form.

When ``r1 r2 = 1`` the absorption probability is ``exp(x1 u + y2 v)``.  Forcing
``method="bvp"`` runs the full contour integral and Laplace inversion, so the
closed form measures the accuracy of the whole chain.
"""

import warnings

import numpy as np

from quadescape import (DegenerateBoundaryCase, QuadrantSolver, special_points,
                        validate_params)

# product-form sets sit exactly on one classification boundary; the warning
# only reports which side was taken
warnings.simplefilter("ignore", DegenerateBoundaryCase)

p = validate_params(1.0, 1.0, 0.0, 2.0, 0.5)
kd = special_points(p)
print(f"x1 = {kd.x1}, y2 = {kd.y2}")

bvp = QuadrantSolver(p, method="bvp")
u = np.linspace(0.1, 5, 20)
err = np.abs(bvp.absorption_prob_axis(u) - np.exp(kd.x1 * u))
print(f"axis: max error over 20 points {err.max():.2e}")

for u0, v0 in ((1.0, 1.0), (0.3, 0.5), (2.0, 0.2)):
    pa, _ = bvp.interior_probabilities(u0, v0)
    exact = np.exp(kd.x1 * u0 + kd.y2 * v0)
    print(f"interior ({u0}, {v0}): {pa:.9f} vs {exact:.9f}")
