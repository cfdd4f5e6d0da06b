"""Model parameters, wedge geometry and regime classification.

The process lives in the quadrant with drift ``(mu1, mu2)``, unit variances,
correlation ``rho`` and reflection directions ``(1, -r1)`` on the vertical
axis and ``(-r2, 1)`` on the horizontal axis.  With ``r1 * r2 >= 1`` the
process can be trapped at the corner, where it is absorbed.
"""

import enum
import math
import warnings
from dataclasses import asdict, dataclass, field

from .errors import (
    CorrelationOutOfRange,
    DegenerateBoundaryCase,
    NonPositiveDrift,
    NonPositiveReflection,
    ReflectionProductBelowOne,
)

#: tolerance for structural equalities such as r1 * r2 = 1
STRUCT_TOL = 1e-12
#: tolerance for the angular form of the same equalities
ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Validated model parameters (use :func:`validate_params`)."""

    mu1: float
    mu2: float
    rho: float
    r1: float
    r2: float

    def swapped(self):
        """Parameters of the mirror image process (axes exchanged)."""
        return ModelParams(self.mu2, self.mu1, self.rho, self.r2, self.r1)

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class WedgeGeometry:
    """Angles of the equivalent wedge problem, in radians."""

    beta: float
    delta: float
    epsilon: float
    theta: float
    alpha: float

    def as_dict(self):
        return asdict(self)


class AxisRegime(str, enum.Enum):
    """Shape of the axis absorption probability for large starting points.

    ``PoleX1`` is pure exponential decay at the pole rate (``x1`` on the
    horizontal axis, ``y2`` on the vertical one).  The two branch variants
    decay at the branch point rate with a ``u**-3/2`` or ``u**-1/2``
    correction.
    """

    PoleX1 = "PoleX1"
    BranchMinus32 = "BranchMinus32"
    BranchMinus12 = "BranchMinus12"


@dataclass(frozen=True)
class Classification:
    """Pole, index and asymptotic-regime flags of a parameter set."""

    pole_x1_in_S: bool
    pole_x1_in_G: bool
    chi: int
    kappa: int
    d: float
    d_plus_Delta: float
    product_form: bool
    axis_asymptotic_regime_h: AxisRegime
    axis_asymptotic_regime_v: AxisRegime
    degenerate: tuple = field(default=())

    def as_dict(self):
        out = asdict(self)
        out["axis_asymptotic_regime_h"] = self.axis_asymptotic_regime_h.value
        out["axis_asymptotic_regime_v"] = self.axis_asymptotic_regime_v.value
        out["degenerate"] = list(self.degenerate)
        return out


def validate_params(mu1, mu2, rho, r1, r2):
    """Check the admissible ranges and return a :class:`ModelParams`.

    Raises
    ------
    NonPositiveDrift, CorrelationOutOfRange, NonPositiveReflection,
    ReflectionProductBelowOne
        The first violated constraint, with ``quantity`` naming it.
    """
    vals = [float(v) for v in (mu1, mu2, rho, r1, r2)]
    if not all(math.isfinite(v) for v in vals):
        raise NonPositiveDrift("parameters must be finite", quantity="params")
    mu1, mu2, rho, r1, r2 = vals
    if mu1 <= 0:
        raise NonPositiveDrift(f"mu1 must be > 0, got {mu1}", quantity="mu1")
    if mu2 <= 0:
        raise NonPositiveDrift(f"mu2 must be > 0, got {mu2}", quantity="mu2")
    if not abs(rho) < 1:
        raise CorrelationOutOfRange(f"|rho| must be < 1, got {rho}", quantity="rho")
    if r1 <= 0:
        raise NonPositiveReflection(f"r1 must be > 0, got {r1}", quantity="r1")
    if r2 <= 0:
        raise NonPositiveReflection(f"r2 must be > 0, got {r2}", quantity="r2")
    if r1 * r2 < 1 - STRUCT_TOL:
        raise ReflectionProductBelowOne(
            f"r1*r2 must be >= 1, got {r1 * r2}", quantity="r1*r2")
    return ModelParams(mu1, mu2, rho, r1, r2)


def params_from_mapping(m):
    """Validate parameters given as a mapping with keys mu1, mu2, rho, r1, r2."""
    return validate_params(m["mu1"], m["mu2"], m["rho"], m["r1"], m["r2"])


def wedge_geometry(params):
    """Wedge angle ``beta``, reflection angles, drift angle and ``alpha``.

    Every angle is resolved with ``atan2(sin(beta), denominator)`` so it
    lands in ``(0, pi)`` and equals ``pi/2`` when the denominator vanishes.
    """
    p = params
    beta = math.acos(-p.rho)
    sb, cb = math.sin(beta), math.cos(beta)
    delta = math.atan2(sb, -p.r2 + cb)
    epsilon = math.atan2(sb, -p.r1 + cb)
    theta = math.atan2(sb, p.mu1 / p.mu2 + cb)
    alpha = (delta + epsilon - math.pi) / beta
    return WedgeGeometry(beta, delta, epsilon, theta, alpha)


def _compare(lhs, rhs, name, degenerate):
    """Sign of ``lhs - rhs`` with a tolerance band reported as degenerate."""
    diff = lhs - rhs
    if abs(diff) <= STRUCT_TOL * max(1.0, abs(rhs)):
        degenerate.append(name)
        return 0
    return 1 if diff > 0 else -1


def classify(params, geometry=None):
    """Classify a parameter set into its pole, index and asymptotic regime.

    Inequalities within ``1e-12`` of equality take the equality branch and
    are listed in ``Classification.degenerate``; a
    :class:`~quadescape.errors.DegenerateBoundaryCase` warning is issued.
    """
    g = geometry if geometry is not None else wedge_geometry(params)
    pi = math.pi
    degenerate = []

    s_pole = _compare(2 * g.delta - g.theta, pi, "2*delta-theta=pi", degenerate)
    s_chi = _compare(2 * g.delta - g.theta + g.beta, 2 * pi,
                     "2*delta-theta+beta=2*pi", degenerate)
    s_kappa = _compare(g.epsilon + g.delta + g.beta, 2 * pi,
                       "epsilon+delta+beta=2*pi", degenerate)
    s_vert = _compare(2 * g.epsilon + g.theta - g.beta, pi,
                      "2*epsilon+theta-beta=pi", degenerate)

    chi = -1 if s_chi > 0 else 0
    kappa = chi if s_kappa >= 0 else chi - 1
    # d = pi exactly when k1 vanishes at the vertex of the hyperbola
    d = pi if s_chi == 0 else 0.0
    d_plus_delta = 2.0 * (g.epsilon + g.delta + g.beta + (chi - 2) * pi)

    product = abs(params.r1 * params.r2 - 1.0) <= STRUCT_TOL

    def regime(sign):
        if sign > 0:
            return AxisRegime.PoleX1
        if sign < 0:
            return AxisRegime.BranchMinus32
        return AxisRegime.BranchMinus12

    if degenerate:
        warnings.warn(
            "near-equality in " + ", ".join(degenerate)
            + "; equality branch chosen", DegenerateBoundaryCase, stacklevel=2)

    return Classification(
        pole_x1_in_S=s_pole > 0,
        pole_x1_in_G=chi == -1,
        chi=chi,
        kappa=kappa,
        d=d,
        d_plus_Delta=d_plus_delta,
        product_form=product,
        axis_asymptotic_regime_h=regime(s_pole),
        axis_asymptotic_regime_v=regime(s_vert),
        degenerate=tuple(degenerate),
    )


def chi_delta_residual(geometry, classification):
    """Residual of ``((-(d+Delta)/(2 pi)) + chi - 1) * pi/beta = -alpha - 1``."""
    g, c = geometry, classification
    lhs = (-c.d_plus_Delta / (2 * math.pi) + c.chi - 1) * math.pi / g.beta
    return lhs + g.alpha + 1.0
