"""Exception hierarchy and warnings shared by all modules."""


class GrandLpError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(GrandLpError, ValueError):
    """An argument violates its documented domain."""


class QuadratureError(GrandLpError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class SupportTooLowError(GrandLpError):
    """The generating function's support ends at or below the dimension."""


class EmptyWindowError(GrandLpError):
    """A truncation window does not intersect the generating function's support."""


class UnsupportedFamilyError(GrandLpError):
    """No closed-form asymptotic is available for this family."""


class DegradedAccuracyWarning(UserWarning):
    """A finite-difference gradient fallback was used; accuracy is reduced."""


class DegenerateBoundWarning(UserWarning):
    """A continuity bound degenerated (empty window, infinite denominator)."""
