"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when an input violates a documented invariant."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver exhausts its iteration budget."""


class UnsupportedSizeError(ValueError):
    """Raised when an exhaustive search is refused for being too large."""
