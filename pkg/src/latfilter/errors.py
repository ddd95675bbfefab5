"""Exceptions raised by latfilter."""


class LatFilterError(Exception):
    """Base class for all latfilter errors."""


class ConfigurationError(LatFilterError, ValueError):
    """A filter parameter is outside its valid range."""


class ImageError(LatFilterError, ValueError):
    """An image violates the grid contract (shape, finiteness, index range)."""


class ImageFormatError(LatFilterError, OSError):
    """An image file is malformed, truncated or uses an unsupported encoding."""


class NumericError(LatFilterError, ArithmeticError):
    """A computation produced non-finite values."""


class SolverError(LatFilterError, ArithmeticError):
    """The linear solver failed to reach the requested tolerance."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(
            f"{message} (relative residual {residual:.3e} after {iterations} iterations)"
        )
        self.residual = residual
        self.iterations = iterations


class InternalInvariantError(LatFilterError, RuntimeError):
    """An internal bookkeeping invariant was broken."""
