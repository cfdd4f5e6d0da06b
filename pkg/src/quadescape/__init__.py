"""Escape and absorption probabilities of reflected Brownian motion in the quadrant.

The process has drift ``(mu1, mu2)``, unit variances, correlation ``rho`` and
oblique reflection ``(1, -r1)`` / ``(-r2, 1)`` on the axes; with
``r1 r2 >= 1`` it may be absorbed at the corner.  The Laplace transform of
the escape probability is computed from an explicit contour integral and
inverted numerically; Monte Carlo and finite-difference oracles provide
independent checks.
"""

import types as _types

from .bvp import (BvpTolerances, ContourDiscretization, G_eval, Psi1Evaluator,
                  PsiEvaluators, build_contour, build_evaluators, psi1_eval,
                  psi2_eval, psi_eval)
from .errors import (AllCensored, ArgTrackingFailed, ClampWarning,
                     CorrelationOutOfRange, DegenerateBoundaryCase,
                     DivisionNearZero, InvalidParameters, InversionUnstable,
                     KernelZero, NearContour, NonPositiveDrift,
                     NonPositiveReflection, NumericalError, OnBranchCut, OnCut,
                     OutsideDomain, PoleAtX1, PoleAtZero, QuadEscapeError,
                     ReflectionProductBelowOne, SolverDiverged)
from .gluing import (GluingContext, W_eval, chebyshev_T, chebyshev_T_prime,
                     gluing_context, w_eval, w_prime)
from .inversion import (AsymptoticReport, Axis, InversionConfig, QuadrantSolver,
                        asymptotics, euler_invert, evaluate_asymptote,
                        fit_origin_exponent, fit_rate)
from .kernel import (HyperbolaPoint, KernelData, branch_points, branch_X,
                     branch_Y, hyperbola_point, hyperbola_residual, in_G,
                     kernel_eval, special_points)
from .model import (AxisRegime, Classification, ModelParams, WedgeGeometry,
                    chi_delta_residual, classify, params_from_mapping,
                    validate_params, wedge_geometry)

__version__ = "0.1.0"

__all__ = [name for name, obj in list(globals().items())
           if not name.startswith("_") and not isinstance(obj, _types.ModuleType)]
