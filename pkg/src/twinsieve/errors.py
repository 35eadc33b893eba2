"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so the classes are kept
separate rather than collapsed into ValueError.
"""


class TwinSieveError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(TwinSieveError, ValueError):
    """An argument violates an operation's domain (e.g. p < 5, n < 3)."""


class InsufficientTableError(TwinSieveError):
    """The supplied prime table is too small for the requested query.

    Tables never extend themselves silently; callers size them up front.
    """


class OutOfRangeError(InsufficientTableError):
    """A prime index beyond the end of the table was requested."""


class FeasibilityError(TwinSieveError):
    """A full-period scan was requested above the desk-scale bound
    without the explicit override flag."""


class TableCacheError(TwinSieveError):
    """A prime-table cache file is malformed, truncated or corrupted."""
