"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a formula."""


class UnsupportedDimensionError(DomainError):
    """The requested closed-form constant is unavailable for this dimension."""


class NoBoundError(DomainError):
    """(d, p, q) falls in no regime covered by the bounds."""


class CapacityError(RuntimeError):
    """Problem size exceeds the exact solver's cap."""
