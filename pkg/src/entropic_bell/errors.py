class EntropicBellError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(EntropicBellError, ValueError):
    """An input object violates its invariants (normalization, positivity, ...)."""


class UsageError(EntropicBellError, ValueError):
    """Arguments are well-formed objects but do not fit together."""


class ConvergenceError(EntropicBellError, ArithmeticError):
    """An iterative numeric routine hit its iteration cap."""
