"""Exception types and warning categories shared across the package."""

from __future__ import annotations


class EspressoError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(EspressoError, ValueError):
    """An input violates a documented precondition or invariant."""


class EmptyInput(ValidationError):
    """Series has no channels or fewer than two samples."""


class RaggedChannels(ValidationError):
    """Channels of a multichannel series have unequal lengths."""


class NonFinite(ValidationError):
    """A NaN or infinity was found during series validation."""

    def __init__(self, channel: int, index: int):
        super().__init__(f"non-finite value in channel {channel} at index {index}")
        self.channel = channel
        self.index = index


class OutOfRange(ValidationError):
    """A window start or channel index falls outside the series."""


class LengthMismatch(ValidationError):
    """Two vectors that must have equal length do not."""


class SubseqTooLong(ValidationError):
    """Subsequence length exceeds half the series length."""


class InvalidBoundaries(ValidationError):
    """Boundary indices are not strictly increasing inside (0, N)."""


class NoCandidates(ValidationError):
    """Candidate extraction produced no usable change-point candidates."""


class TraceTooShort(ValidationError):
    """Knee-point estimation needs at least three gain values."""


class IngestError(EspressoError):
    """Base class for dataset-file problems (maps to I/O exit code)."""


class ParseError(IngestError):
    """A CSV row could not be parsed."""

    def __init__(self, row: int, col: int, detail: str = ""):
        msg = f"parse error at row {row}, column {col}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.row = row
        self.col = col


class MissingColumn(IngestError):
    """A column named in the manifest is absent from the file header."""

    def __init__(self, name: str):
        super().__init__(f"column {name!r} not found in header")
        self.name = name


class NonNumeric(IngestError):
    """A declared channel column holds a value that is not a number."""

    def __init__(self, row: int, col: int, value: str = ""):
        msg = f"non-numeric value at row {row}, column {col}"
        if value:
            msg += f": {value!r}"
        super().__init__(msg)
        self.row = row
        self.col = col


class DegenerateSegmentWarning(UserWarning):
    """All channel areas of a segment are zero; its entropy is taken as 0."""


class EmptyEstimateWarning(UserWarning):
    """An error metric was requested against an empty estimate list."""


class PipelineFallbackWarning(UserWarning):
    """Hybrid search degraded to the dense-grid entropy search."""
