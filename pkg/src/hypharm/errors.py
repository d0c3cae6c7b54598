"""Exception types shared across the package."""

from .bigfloat import PrecisionError

__all__ = ["DomainError", "ConvergenceError", "TerminationError", "PrecisionError"]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(ValueError):
    """A series instance falls outside its guaranteed convergence region."""


class TerminationError(ValueError):
    """Exact summation was requested for a series that does not terminate."""
