"""Exception hierarchy shared across the package."""


class SmoothlabError(Exception):
    """Base class for all smoothlab errors."""


class DomainError(SmoothlabError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class NonDifferentiableError(DomainError):
    """Derivative requested at a point where the function has a kink."""


class CapacityError(SmoothlabError):
    """A requested range exceeds the configured resource limits."""


class AccuracyError(SmoothlabError):
    """A numerical routine could not reach its target tolerance.

    The best available estimate is kept in ``estimate`` so callers can
    still inspect it.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
