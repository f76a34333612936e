"""Exception hierarchy shared across the pipeline."""


class ScreenAdvisorError(Exception):
    """Base class for all package errors."""


class InvalidInputError(ScreenAdvisorError):
    """A caller-supplied value violates a precondition."""


class DecodeError(ScreenAdvisorError):
    """The recording could not be opened or decoded."""


class InvalidCropError(ScreenAdvisorError):
    """Crop rectangle falls outside the source frame bounds."""


class FrameOutOfRangeError(ScreenAdvisorError):
    """A planned timestamp lies beyond the end of the recording."""

    def __init__(self, timestamp_s: float):
        self.timestamp_s = timestamp_s
        super().__init__(f"timestamp {timestamp_s:g}s is beyond the end of the recording")


class ResponseParseError(ScreenAdvisorError):
    """No JSON object could be located in a model response."""

    def __init__(self, message: str, raw: str):
        self.raw = raw
        super().__init__(message)


class ResponseSchemaError(ScreenAdvisorError):
    """A model response parsed as JSON but violates the expected schema."""

    def __init__(self, message: str, field: str):
        self.field = field
        super().__init__(f"{message} (field: {field})")


class ProviderError(ScreenAdvisorError):
    """A provider call failed."""


class ProviderUnavailableError(ProviderError):
    """All retry attempts were exhausted."""

    def __init__(self, message: str, attempts: int):
        self.attempts = attempts
        super().__init__(f"{message} after {attempts} attempt(s)")


class ScriptExhaustedError(ProviderError):
    """The mock script has no queued response for the requested phase."""

    def __init__(self, phase: str):
        self.phase = phase
        super().__init__(f"mock script exhausted for phase '{phase}'")


class ScriptFormatError(ProviderError):
    """The mock script file is malformed."""


class SegmentError(ScreenAdvisorError):
    """A segment worker failed; carries the offending batch index."""

    def __init__(self, segment_index: int, batch_index: int, cause: Exception):
        self.segment_index = segment_index
        self.batch_index = batch_index
        self.cause = cause
        super().__init__(
            f"segment {segment_index} failed at batch {batch_index}: {cause}"
        )


class EmptyTraceError(ScreenAdvisorError):
    """Phase 2 was asked to analyze a trace with no actions."""


class SessionStateError(ScreenAdvisorError):
    """An operation was attempted in an incompatible session state."""


class SessionNotFoundError(ScreenAdvisorError):
    """No session exists with the requested id."""
