"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iterative procedure exhausted its budget without converging."""


class EstimationError(RuntimeError):
    """A decay-exponent or Hurst estimate cannot be formed from the data."""


class TruncationWarning(UserWarning):
    """A truncated series still carries a non-negligible tail."""
