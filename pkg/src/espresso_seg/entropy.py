"""Area-share entropy objective, greedy boundary search, and knee detection.

A segment's entropy is the Shannon entropy (base 2) of how its signal area
is shared across channels. Splitting a series lowers the length-weighted
sum of segment entropies; the drop relative to the unsplit series is the
information gain that the greedy search maximizes over a candidate set.

Entropy over areas needs non-negative signals, so each channel is shifted
by its global minimum plus a tiny epsilon when the view is built. The shift
is a declared convention (entropy is not shift-invariant) and is recorded
on the view so results are reproducible.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DegenerateSegmentWarning,
    InvalidBoundaries,
    NoCandidates,
    TraceTooShort,
    ValidationError,
)
from .series import MultiSeries

_EPS_FRACTION = 1e-9
_DENOM_GUARD = 1e-12


@dataclass(frozen=True)
class EntropyView:
    """Shifted non-negative signals plus per-channel prefix sums for O(1) areas."""

    shifted: np.ndarray
    prefix: np.ndarray
    offsets: np.ndarray

    @classmethod
    def from_series(cls, series: MultiSeries) -> "EntropyView":
        data = series.data
        mins = data.min(axis=1, keepdims=True)
        ranges = data.max(axis=1, keepdims=True) - mins
        offsets = -mins + _EPS_FRACTION * ranges
        shifted = data + offsets
        prefix = np.zeros((data.shape[0], data.shape[1] + 1))
        np.cumsum(shifted, axis=1, out=prefix[:, 1:])
        shifted.setflags(write=False)
        prefix.setflags(write=False)
        return cls(shifted=shifted, prefix=prefix, offsets=offsets.ravel())

    @property
    def n_channels(self) -> int:
        return self.shifted.shape[0]

    @property
    def n_samples(self) -> int:
        return self.shifted.shape[1]


@dataclass(frozen=True)
class StopRule:
    """When the greedy search stops adding boundaries.

    With ``fixed_k`` set, exactly ``k - 1`` boundaries are added (fewer if
    candidates run out). Otherwise the search runs to a cap and the number
    of segments is chosen retrospectively by :func:`knee_point`; the cap is
    ``max_boundaries`` if given, twice ``k_hint`` if a rough expectation is
    known, else 20.
    """

    fixed_k: int | None = None
    k_hint: int | None = None
    max_boundaries: int | None = None

    def __post_init__(self):
        if self.fixed_k is not None and self.fixed_k < 1:
            raise ValidationError(f"fixed_k must be >= 1, got {self.fixed_k}")

    @classmethod
    def fixed(cls, k: int) -> "StopRule":
        return cls(fixed_k=k)

    @classmethod
    def auto(cls, k_hint: int | None = None, max_boundaries: int | None = None) -> "StopRule":
        return cls(k_hint=k_hint, max_boundaries=max_boundaries)

    def budget(self, n_candidates: int) -> tuple[int, bool]:
        """(number of greedy additions, whether to apply the knee rule after)."""
        if self.fixed_k is not None:
            return min(self.fixed_k - 1, n_candidates), False
        if self.max_boundaries is not None:
            cap = self.max_boundaries
        elif self.k_hint is not None:
            cap = 2 * self.k_hint
        else:
            cap = 20
        return min(cap, n_candidates), True


@dataclass(frozen=True)
class Segmentation:
    """An ordered boundary set with its per-step information-gain trace."""

    boundaries: tuple[int, ...]
    ig_trace: tuple[float, ...]
    source_channel: int | str | None = None

    @property
    def k(self) -> int:
        return len(self.boundaries) + 1

    def with_source(self, source_channel) -> "Segmentation":
        return replace(self, source_channel=source_channel)


def _check_range(view: EntropyView, start: int, end: int):
    if not 0 <= start < end <= view.n_samples:
        raise ValidationError(f"segment [{start}, {end}) out of range for N={view.n_samples}")


def segment_entropy(view: EntropyView, seg_start: int, seg_end: int) -> float:
    """Base-2 Shannon entropy of channel area shares over ``[seg_start, seg_end)``.

    Lies in ``[0, log2(D)]``. A segment where every channel area is zero has
    no defined share vector; by convention it contributes 0 and a
    :class:`DegenerateSegmentWarning` is emitted.
    """
    _check_range(view, seg_start, seg_end)
    areas = view.prefix[:, seg_end] - view.prefix[:, seg_start]
    total = areas.sum()
    if total <= 0.0:
        warnings.warn(
            f"segment [{seg_start}, {seg_end}) has zero area in every channel",
            DegenerateSegmentWarning,
            stacklevel=2,
        )
        return 0.0
    p = areas / total
    nz = p[p > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def information_gain(view: EntropyView, boundaries) -> float:
    """Whole-series entropy minus the weighted entropies of the cut segments.

    Segments are weighted by their share of the total signal area, the
    same measure the entropies themselves are taken over. A segment's
    share vector is then the weighted mixture of its parts' share
    vectors, so by concavity of entropy a refinement never decreases the
    result; weighting by plain segment length instead breaks that
    guarantee whenever area density varies along the series. The empty
    boundary list gives exactly 0.
    """
    boundaries = [int(b) for b in boundaries]
    n = view.n_samples
    if any(not 0 < b < n for b in boundaries) or any(
        b2 <= b1 for b1, b2 in zip(boundaries, boundaries[1:])
    ):
        raise InvalidBoundaries(f"boundaries must be strictly increasing in (0, {n}): {boundaries}")
    edges = [0, *boundaries, n]
    total = view.prefix[:, n].sum() - view.prefix[:, 0].sum()
    if total <= 0.0:
        return 0.0
    whole = segment_entropy(view, 0, n)
    weighted = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        area = view.prefix[:, hi].sum() - view.prefix[:, lo].sum()
        if area > 0.0:
            weighted += (area / total) * segment_entropy(view, lo, hi)
    return whole - weighted


def greedy_entropy_seg(view: EntropyView, candidates, stop: StopRule) -> Segmentation:
    """Greedily add the candidate boundary that maximizes information gain.

    Each iteration evaluates the gain of refining the current boundary set
    by every remaining candidate and keeps the best (ties toward the
    smallest index); each candidate is consumed at most once. Under an
    automatic stop rule the search runs to its budget and the kept prefix
    is chosen by :func:`knee_point` on the gain trace (kept whole when the
    trace is too short to knee).

    Raises
    ------
    NoCandidates
        If the candidate list is empty.
    """
    candidates = [int(c) for c in candidates]
    if not candidates:
        raise NoCandidates("empty candidate list")
    n = view.n_samples
    if any(not 0 < c < n for c in candidates) or any(
        c2 <= c1 for c1, c2 in zip(candidates, candidates[1:])
    ):
        raise InvalidBoundaries(f"candidates must be strictly increasing in (0, {n})")

    budget, apply_knee = stop.budget(len(candidates))
    remaining = list(candidates)
    chosen: list[int] = []
    trace: list[float] = []
    for _ in range(budget):
        best_ig = -math.inf
        best = None
        for cand in remaining:
            ig = information_gain(view, sorted(chosen + [cand]))
            if ig > best_ig:
                best_ig = ig
                best = cand
        chosen.append(best)
        remaining.remove(best)
        trace.append(best_ig)

    if apply_knee and len(trace) >= 3:
        keep = knee_point(trace)
        chosen = chosen[:keep]
        trace = trace[:keep]

    return Segmentation(boundaries=tuple(sorted(chosen)), ig_trace=tuple(trace))


def knee_point(ig_trace, baseline: float = 0.0) -> int:
    """Number of boundaries at the knee of a gain trace.

    ``ig_trace[k-1]`` is the objective after the k-th boundary; ``baseline``
    is its value with no boundaries (0 for an information-gain trace). The
    knee is the k maximizing the ratio of the gain step into k over the
    gain step out of k; vanishing denominators count as infinite, and ties
    resolve to the smallest k. The segment count is the returned k plus 1.

    Raises
    ------
    TraceTooShort
        If fewer than three trace values are supplied.
    """
    trace = [float(v) for v in ig_trace]
    if len(trace) < 3:
        raise TraceTooShort(f"need >= 3 gain values, got {len(trace)}")
    levels = np.array([baseline, *trace])
    steps = np.diff(levels)
    num = steps[:-1]
    den = steps[1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(np.abs(den) < _DENOM_GUARD, np.inf, num / den)
    return int(np.argmax(ratios)) + 1
