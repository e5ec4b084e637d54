"""Exception types shared across the package."""


class HeiskorError(Exception):
    """Base class for all package errors."""


class DomainError(HeiskorError, ValueError):
    """An argument is outside the range an operation supports."""


class ConvergenceError(HeiskorError, RuntimeError):
    """An iterative evaluation did not reach its tolerance within its cap."""


class CertificationError(HeiskorError, RuntimeError):
    """A computed result failed a built-in validity or tolerance check."""


class CrossValidationError(CertificationError):
    """Two independent evaluation methods disagree beyond their combined
    error estimates."""


class ConfigError(HeiskorError, ValueError):
    """A run configuration failed validation (CLI layer)."""
