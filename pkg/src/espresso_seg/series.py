"""Core multichannel time-series container, window geometry, and validation.

All indexing in this package is 0-based. Series are stored channel-major
(``D x N``) as read-only float64 arrays so they can be shared freely
between concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, NonFinite, OutOfRange, RaggedChannels, ValidationError


@dataclass(frozen=True)
class SubseqSpec:
    """Sliding-window geometry.

    Parameters
    ----------
    length : int
        Window length ``L`` in samples, at least 2. This is the single
        headline parameter of the whole method.
    exclusion_radius : int, optional
        Half-width of the trivial-match exclusion zone in samples.
        Defaults to ``ceil(L / 2)``.
    """

    length: int
    exclusion_radius: int | None = None

    def __post_init__(self):
        if not isinstance(self.length, (int, np.integer)) or self.length < 2:
            raise ValidationError(f"subsequence length must be an integer >= 2, got {self.length!r}")
        if self.exclusion_radius is None:
            object.__setattr__(self, "exclusion_radius", math.ceil(self.length / 2))
        if not isinstance(self.exclusion_radius, (int, np.integer)) or self.exclusion_radius < 1:
            raise ValidationError(f"exclusion radius must be an integer >= 1, got {self.exclusion_radius!r}")
        object.__setattr__(self, "length", int(self.length))
        object.__setattr__(self, "exclusion_radius", int(self.exclusion_radius))


@dataclass(frozen=True, eq=False)
class MultiSeries:
    """A ``D x N`` multichannel series with channel metadata.

    Instances are immutable: ``data`` is a read-only float64 array, so a
    series can be shared across threads without copying.
    """

    data: np.ndarray
    channel_names: tuple[str, ...]
    sample_rate_hz: float | None = None

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    def channel(self, index: int) -> np.ndarray:
        if not 0 <= index < self.n_channels:
            raise OutOfRange(f"channel {index} not in [0, {self.n_channels})")
        return self.data[index]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (
            self.channel_names == other.channel_names
            and self.sample_rate_hz == other.sample_rate_hz
            and self.data.shape == other.data.shape
            and bool(np.array_equal(self.data, other.data))
        )


def validate_series(
    raw,
    channel_names: list[str] | tuple[str, ...] | None = None,
    sample_rate_hz: float | None = None,
) -> MultiSeries:
    """Validate raw channel data and wrap it as an immutable :class:`MultiSeries`.

    A 1-D input is treated as a single channel. Ragged channel lists and
    non-finite samples are rejected rather than repaired; imputation is a
    pre-processing concern, not this library's.

    Raises
    ------
    EmptyInput
        If there are no channels or fewer than two samples.
    RaggedChannels
        If channels have different lengths.
    NonFinite
        If any sample is NaN or infinite (reports channel and index).
    """
    if isinstance(raw, MultiSeries):
        return raw

    try:
        data = np.asarray(raw, dtype=float)
    except (ValueError, TypeError) as exc:
        if _looks_ragged(raw):
            raise RaggedChannels("channels have unequal lengths") from exc
        raise ValidationError(f"could not interpret input as a numeric matrix: {exc}") from exc
    if data.dtype == object or data.ndim > 2:
        if _looks_ragged(raw):
            raise RaggedChannels("channels have unequal lengths")
        raise ValidationError(f"expected a 2-D numeric matrix, got shape {data.shape}")
    if data.ndim == 1:
        data = data[np.newaxis, :]

    n_channels, n_samples = data.shape if data.ndim == 2 else (0, 0)
    if n_channels == 0 or n_samples < 2:
        raise EmptyInput(f"need at least 1 channel and 2 samples, got {n_channels} x {n_samples}")

    finite = np.isfinite(data)
    if not finite.all():
        channel, index = np.argwhere(~finite)[0]
        raise NonFinite(int(channel), int(index))

    if channel_names is None:
        names = tuple(f"ch{j}" for j in range(n_channels))
    else:
        names = tuple(str(n) for n in channel_names)
        if len(names) != n_channels:
            raise ValidationError(f"{len(names)} channel names for {n_channels} channels")

    if sample_rate_hz is not None and not sample_rate_hz > 0:
        raise ValidationError(f"sample rate must be positive, got {sample_rate_hz}")

    data = np.ascontiguousarray(data, dtype=np.float64)
    data.setflags(write=False)
    return MultiSeries(data=data, channel_names=names, sample_rate_hz=sample_rate_hz)


def subsequence(series: MultiSeries, channel: int, start: int, spec: SubseqSpec) -> np.ndarray:
    """Return the length-``L`` window of ``channel`` starting at ``start``.

    Valid starts are ``0 <= start <= N - L``; anything else raises
    :class:`OutOfRange`.
    """
    x = series.channel(channel)
    if not 0 <= start <= series.n_samples - spec.length:
        raise OutOfRange(
            f"start {start} not in [0, {series.n_samples - spec.length}] for L={spec.length}"
        )
    return x[start : start + spec.length]


def _looks_ragged(raw) -> bool:
    try:
        lengths = {len(row) for row in raw}
    except TypeError:
        return False
    return len(lengths) > 1
