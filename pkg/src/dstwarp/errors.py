"""Exception hierarchy.

The CLI maps :class:`DataError` to exit code 2 and :class:`NumericalError`
to exit code 3.
"""


class DstWarpError(Exception):
    """Base class for all package errors."""


class DataError(DstWarpError, ValueError):
    """Malformed, missing or inconsistent input data."""


class NumericalError(DstWarpError, ArithmeticError):
    """A computation is undefined for the given input (zero variance, no path, ...)."""
