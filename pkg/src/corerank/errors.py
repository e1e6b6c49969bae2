"""Exception types shared across the package."""


class CorerankError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CorerankError):
    """Input data violates a documented invariant."""


class FormatError(CorerankError):
    """A file does not conform to its declared on-disk format."""


class ConfigurationError(CorerankError):
    """Mutually exclusive or out-of-range configuration values."""
