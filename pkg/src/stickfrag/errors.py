"""Exceptions shared across the package."""


class ConfigError(ValueError):
    """Raised when a model configuration (file or in-memory) is invalid."""


class ResourceLimitError(RuntimeError):
    """Raised when a computation would exceed a declared resource guard."""
