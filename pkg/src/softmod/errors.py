"""Exception types shared across the package."""


class DataError(ValueError):
    """Invalid input data: parse failures, shape mismatches, unusable graphs."""


class NumericalError(RuntimeError):
    """Numerical failure during optimization (non-finite loss, collapsed centers)."""
