"""Exception hierarchy shared across the library."""


class AencapError(Exception):
    """Base class for all library errors."""


class NonPositiveMean(AencapError, ValueError):
    """A mean parameter is zero, negative, or not finite."""


class NegativeArgument(AencapError, ValueError):
    """A function argument lies outside its supported domain."""


class WrongRegime(AencapError):
    """A closed form was requested outside its region of validity."""


class NonConvergence(AencapError):
    """A truncated series did not meet its stopping rule within the term cap."""


class ToleranceNotMet(AencapError):
    """Adaptive quadrature could not certify the requested tolerance."""
