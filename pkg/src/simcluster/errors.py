"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap before reaching tolerance."""


class IngestError(ValueError):
    """A data file could not be parsed into a valid object."""


class ConfigError(ValueError):
    """A run configuration is invalid; raised before any computation starts."""
