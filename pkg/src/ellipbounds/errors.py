"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(ValueError):
    """An operation was asked for something it does not support."""


class TruncationError(ArithmeticError):
    """A series did not reach its tolerance within the allowed number of terms."""

    def __init__(self, message, terms_used, partial_sum):
        super().__init__(f"{message} (terms used: {terms_used})")
        self.terms_used = terms_used
        self.partial_sum = partial_sum


class AccuracyError(ArithmeticError):
    """Adaptive quadrature hit its refinement limit before meeting tolerance."""

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate
