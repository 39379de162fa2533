"""Exception types shared across the package."""


class HypfracError(Exception):
    """Base class for all package errors."""


class DomainError(HypfracError, ValueError):
    """An argument violates a documented precondition."""


class UnsupportedRangeError(DomainError):
    """An argument is valid mathematically but outside the supported range."""


class NumericError(HypfracError, RuntimeError):
    """A numerical procedure failed to converge or lost too much accuracy."""


class CalibrationError(NumericError):
    """A self-calibration step (e.g. transform round trip) missed its tolerance."""
