"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised when caller-supplied data violates a documented precondition."""


class EvaluationDomainError(ValueError):
    """Raised when a time function or family is evaluated at a singular point."""
