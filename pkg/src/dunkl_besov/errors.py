"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(ValueError):
    """An off-grid evaluation fell outside the supported extension band."""
