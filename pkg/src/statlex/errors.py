"""Exception types shared across the package."""


class StatlexError(Exception):
    """Base class for all package-specific errors."""


class CorpusError(StatlexError):
    """Raised for invalid or degenerate corpora (too few documents, missing responses)."""


class InvalidStateError(StatlexError):
    """Raised when an operation is applied to data in the wrong state
    (e.g. re-weighting an already weighted matrix)."""


class InputError(StatlexError):
    """Raised for malformed numeric input (non-finite values, bad shapes)."""


class ConfigError(StatlexError):
    """Raised for invalid configuration values."""


class ParseError(StatlexError):
    """Raised when a data file cannot be parsed; message carries file/line context."""


class CoverageError(StatlexError):
    """Raised when price series do not cover the requested event window."""


class EstimationError(StatlexError):
    """Raised when a statistical estimate is undefined on the given data."""
