"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, data problems
exit 2, numerical failures exit 3.
"""


class CFRefineError(Exception):
    """Base class for all cfrefine errors."""


class UsageError(CFRefineError):
    """Invalid parameter value or flag combination."""


class DataError(CFRefineError):
    """Malformed or inconsistent input data."""


class NumericalError(CFRefineError):
    """A numerical routine failed (e.g. a factorization did not converge)."""
