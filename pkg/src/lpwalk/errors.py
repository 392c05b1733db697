"""Exception hierarchy shared by all lpwalk modules.

The CLI maps these onto process exit codes: ConfigurationError -> 2,
ResourceLimitError -> 3.
"""


class LpwalkError(Exception):
    """Base class for all errors raised by lpwalk."""


class ConfigurationError(LpwalkError, ValueError):
    """Invalid argument, parameter out of domain, or inconsistent configuration."""


class ResourceLimitError(LpwalkError, RuntimeError):
    """A requested computation exceeds the configured memory cap."""
