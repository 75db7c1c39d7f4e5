"""Exception types shared across the toolkit."""


class AspectAuxError(Exception):
    """Base class for all toolkit errors."""


class DataFormatError(AspectAuxError):
    """Raised when an input file cannot be parsed (malformed XML/JSON/CoNLL-U/vectors)."""


class ValidationError(AspectAuxError):
    """Raised when parsed input violates a structural contract."""


class AlignmentError(ValidationError):
    """Raised when two record streams that must align one-to-one do not."""


class ConfigError(AspectAuxError):
    """Raised for unusable configuration values."""


class MetricUndefinedError(AspectAuxError):
    """Raised when a metric has an empty or single-class denominator."""


class PipelineStageError(AspectAuxError):
    """Wraps a failure inside a named pipeline stage."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
