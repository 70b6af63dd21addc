"""Shared exception types.

The CLI maps these onto exit codes: ConfigError -> 1 (usage),
DataError -> 2 (bad or inconsistent data), OSError -> 3 (I/O).
"""


class FosGraphError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(FosGraphError):
    """Invalid option value or option combination."""


class DataError(FosGraphError):
    """Malformed or inconsistent input data."""
