"""Exception types shared across the package."""


class SigcloudError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(SigcloudError, ValueError):
    """Malformed image bytes; the message names the offending byte offset."""


class ValidationError(SigcloudError, ValueError):
    """An operation was called with inputs violating its contract."""


class InsufficientDataError(ValidationError):
    """A curve operation needs at least two points."""


class NotFoundError(SigcloudError, LookupError):
    """A client, review, or snapshot id does not exist in the store."""


class ConflictError(SigcloudError):
    """The mutation lost to a prior one (duplicate enrollment, decided review)."""


class IntegrityError(SigcloudError):
    """Store content does not match its manifest checksums."""


class ConfigError(SigcloudError, ValueError):
    """Service configuration is invalid; the message names the field."""
