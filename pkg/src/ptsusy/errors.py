"""Exception types shared across the package."""


class PoleError(ValueError):
    """Function evaluated at a pole (e.g. log-gamma at a nonpositive integer)."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of the operation."""


class DegreeCapError(ValueError):
    """Requested polynomial degree exceeds the configured cap."""


class LossOfSignificanceError(ArithmeticError):
    """A cancellation-prone sum lost too many significant digits."""


class SubdivisionLimitError(RuntimeError):
    """Adaptive quadrature hit its panel budget before converging."""


class TailBoundError(RuntimeError):
    """Real-line quadrature could not certify the truncated tails."""


class NonFiniteIntegrandError(RuntimeError):
    """Integrand returned NaN or infinity inside the integration domain."""


class StepUnderflowError(ValueError):
    """Finite-difference step too small to resolve at machine precision."""
