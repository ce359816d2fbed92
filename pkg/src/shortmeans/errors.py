"""Exception types shared across the package."""


class ShortMeansError(ValueError):
    """Base class for invalid arguments to this package."""


class RangeError(ShortMeansError):
    """A window, interval or size bound is violated."""


class DomainError(ShortMeansError):
    """An argument lies outside the domain of the operation."""


class UnsupportedParameterError(ShortMeansError):
    """A parameter value is valid in principle but not implemented."""


class InsufficientDataError(ShortMeansError):
    """Too few usable data points for a fit."""
