"""Exception and warning types.

Validation problems derive from :class:`InvalidParameters` (a ``ValueError``)
and numerical failures from :class:`NumericalError`.  The command line maps
the first family to exit code 2 and the second to exit code 3.
"""


class QuadEscapeError(Exception):
    """Base class for every error raised by the package."""


class InvalidParameters(QuadEscapeError, ValueError):
    """A model parameter violates its admissible range."""

    constraint = "invalid"

    def __init__(self, message, quantity=None):
        super().__init__(message)
        self.quantity = quantity


class NonPositiveDrift(InvalidParameters):
    constraint = "mu1 > 0 and mu2 > 0"


class CorrelationOutOfRange(InvalidParameters):
    constraint = "|rho| < 1"


class NonPositiveReflection(InvalidParameters):
    constraint = "r1 > 0 and r2 > 0"


class ReflectionProductBelowOne(InvalidParameters):
    constraint = "r1 * r2 >= 1"


class NumericalError(QuadEscapeError, ArithmeticError):
    """A numerical routine could not deliver a trustworthy value."""

    def __init__(self, message, quantity=None):
        super().__init__(message)
        self.quantity = quantity


class OnBranchCut(NumericalError):
    """Argument lies on the cut of an algebraic branch."""


class OnCut(NumericalError):
    """Argument of the generalized Chebyshev function lies on (-inf, -1]."""


class PoleAtZero(NumericalError):
    """Evaluation at the simple pole x = 0 of psi1."""


class PoleAtX1(NumericalError):
    """Evaluation at the pole x1 of psi1."""


class OutsideDomain(NumericalError):
    """Point outside the region where psi1 can be evaluated."""


class NearContour(NumericalError):
    """Point too close to the integration contour for a reliable value."""


class DivisionNearZero(NumericalError):
    """Denominator of the boundary function vanishes on the contour."""


class ArgTrackingFailed(NumericalError):
    """Continuous argument tracking could not keep steps below pi."""


class InversionUnstable(NumericalError):
    """Euler-accelerated Laplace inversion did not settle."""


class KernelZero(NumericalError):
    """The kernel K(x, y) vanishes (to tolerance) at the requested point."""


class SolverDiverged(NumericalError):
    """The finite-difference solve failed or produced a non-finite field."""


class AllCensored(NumericalError):
    """Every simulated path hit the time cap."""


class DegenerateBoundaryCase(UserWarning):
    """An angle inequality holds within tolerance of equality."""


class ClampWarning(UserWarning):
    """An inverted probability left [0, 1] by more than the tolerance."""
