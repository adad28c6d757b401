"""Exception taxonomy shared across the package.

Every raised error is one of these five, so callers (and the CLI exit-code
mapping) can distinguish configuration mistakes from numeric blow-ups.
"""


class GvfLabError(Exception):
    """Base class for all package errors."""


class DimensionError(GvfLabError):
    """Array shapes do not line up for the requested operation."""


class DomainError(GvfLabError):
    """An input is outside the mathematical domain of the operation."""


class UsageError(GvfLabError):
    """The caller violated an API contract (bad action index, stepping a finished episode, ...)."""


class NumericError(GvfLabError):
    """A non-finite value appeared where a finite one is required."""


class ConfigError(GvfLabError):
    """An experiment configuration is inconsistent or unparseable."""
