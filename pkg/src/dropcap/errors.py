"""Exception types shared across the toolkit."""


class DropcapError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(DropcapError, ValueError):
    """Invalid parameter value or malformed input specification."""


class DiscretizationError(ValidationError):
    """Requested resolution cannot resolve the shape."""


class UnsupportedConfigurationError(ValidationError):
    """No quadrature rule is implemented for this (dim, alpha, placement)."""


class ConstraintViolationError(ValidationError):
    """A measure violates its mass constraint."""


class NonConvergenceError(DropcapError):
    """A solver hit its iteration cap.

    Carries the best iterate found so callers can still inspect or
    persist partial output.
    """

    def __init__(self, message, result=None, residual=None):
        super().__init__(message)
        self.result = result
        self.residual = residual
