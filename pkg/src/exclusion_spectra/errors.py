"""Exception types shared across the package."""


class ExclusionError(Exception):
    """Base class for errors raised by exclusion_spectra."""


class ParameterError(ExclusionError, ValueError):
    """An argument is outside the range an operation accepts."""


class CapacityError(ExclusionError):
    """The requested state space or matrix is too large to handle."""
