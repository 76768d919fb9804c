"""Arc-based shape curves and change-point candidate extraction.

A profile's nearest-neighbor links form arcs between similar windows.
Counting arcs over each time tick gives the plain arc curve (AC), whose
minima mark shape regime changes. Composing nearest-neighbor links into
chains and weighting each arc by accumulated distance over normalized
temporal span gives the weighted chained arc curve (WCAC), which stays
informative when a regime repeats later in the series or its shape drifts.

Arcs are keyed by unordered endpoint pair: the curve counts crossings of
arcs, not directed edges, so mutual nearest neighbors contribute once.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NoCandidates, ValidationError
from .profile import ProfilePair
from .series import SubseqSpec

CURVE_KINDS = ("AC", "WCAC")


@dataclass(frozen=True)
class Arc:
    """A link between two window positions, possibly via intermediate hops."""

    src: int
    dst: int
    chain_distance: float
    hop_count: int

    @property
    def span(self) -> tuple[int, int]:
        return (min(self.src, self.dst), max(self.src, self.dst))


@dataclass(frozen=True)
class ArcSet:
    arcs: tuple[Arc, ...]
    spec: SubseqSpec


@dataclass(frozen=True)
class ChainConfig:
    """Chain-growth control for :func:`extract_cac`.

    ``threshold`` caps the accumulated distance of a composed chain; when
    omitted it defaults to ``beta * median(mp)`` so the cap adapts to the
    data instead of needing per-dataset hand-tuning.
    """

    threshold: float | None = None
    beta: float = 2.0

    def resolve_threshold(self, mp: np.ndarray) -> float:
        if self.threshold is not None:
            return float(self.threshold)
        if self.beta <= 0:
            raise ValidationError(f"beta must be positive, got {self.beta}")
        return self.beta * float(np.median(mp))


@dataclass(frozen=True)
class ShapeCurve:
    """A per-tick curve (AC or WCAC) plus, once extracted, its candidate minima."""

    values: np.ndarray
    kind: str
    spec: SubseqSpec
    candidates: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.values)

    def with_candidates(self, candidates: list[int]) -> "ShapeCurve":
        return replace(self, candidates=tuple(int(c) for c in candidates))


@dataclass(frozen=True)
class CandidateConfig:
    """Local-minima extraction settings; ``None`` fields default from ``L``.

    ``smoothing_width`` is a centered moving-average width (1 disables it;
    even values are bumped up to odd). ``margin`` discards candidates within
    that many ticks of either curve end, where arc counts are structurally
    depressed. ``min_gap`` thins candidates closer together than a window
    length, which a length-L shape statistic cannot resolve anyway.
    """

    smoothing_width: int | None = None
    margin: int | None = None
    min_gap: int | None = None

    def resolve(self, length: int) -> tuple[int, int, int]:
        width = self.smoothing_width if self.smoothing_width is not None else length
        if width < 1:
            raise ValidationError(f"smoothing width must be >= 1, got {width}")
        if width % 2 == 0:
            width += 1
        margin = self.margin if self.margin is not None else length
        min_gap = self.min_gap if self.min_gap is not None else length
        if margin < 0 or min_gap < 1:
            raise ValidationError(f"invalid margin={margin} or min_gap={min_gap}")
        return int(width), int(margin), int(min_gap)


def _dedupe(arcs: list[Arc]) -> tuple[Arc, ...]:
    """Keep one arc per unordered endpoint pair, preferring the smaller distance."""
    kept: dict[tuple[int, int], Arc] = {}
    for arc in arcs:
        key = arc.span
        old = kept.get(key)
        if old is None or arc.chain_distance < old.chain_distance:
            kept[key] = arc
    return tuple(kept[k] for k in sorted(kept))


def _accumulate(spans: list[tuple[int, int]], weights, num_ticks: int) -> np.ndarray:
    """Sum ``weights`` over every tick each span covers (both endpoints inclusive)."""
    delta = np.zeros(num_ticks + 1)
    for (lo, hi), w in zip(spans, weights):
        delta[lo] += w
        delta[hi + 1] -= w
    return np.cumsum(delta)[:num_ticks]


def hop1_arcs(profile: ProfilePair) -> ArcSet:
    """The deduplicated nearest-neighbor arcs of a profile."""
    arcs = [
        Arc(src=i, dst=int(profile.mpi[i]), chain_distance=float(profile.mp[i]), hop_count=1)
        for i in range(profile.num_windows)
    ]
    return ArcSet(arcs=_dedupe(arcs), spec=profile.spec)


def arc_curve(profile: ProfilePair) -> ShapeCurve:
    """Plain arc curve: the number of unique arcs crossing each time tick."""
    arcs = hop1_arcs(profile)
    values = _accumulate([a.span for a in arcs.arcs], np.ones(len(arcs.arcs)), profile.num_windows)
    values.setflags(write=False)
    return ShapeCurve(values=values, kind="AC", spec=profile.spec)


def extract_cac(profile: ProfilePair, cfg: ChainConfig = ChainConfig()) -> ArcSet:
    """All hop-1 arcs plus composed nearest-neighbor chains under a distance cap.

    A chain steps from each window to its nearest neighbor, to that
    neighbor's neighbor, and so on; each step adds the stepped-from
    window's profile distance to the accumulated chain distance. Growth
    stops when the accumulated distance reaches the threshold or when a
    chain revisits a node (mutual nearest neighbors would otherwise cycle
    forever). The threshold = 0 edge keeps hop-1 arcs only.
    """
    mp, mpi = profile.mp, profile.mpi
    threshold = cfg.resolve_threshold(mp)

    arcs: list[Arc] = []
    for src in range(profile.num_windows):
        end = int(mpi[src])
        acc = float(mp[src])
        arcs.append(Arc(src=src, dst=end, chain_distance=acc, hop_count=1))
        visited = {src, end}
        hops = 1
        while True:
            nxt = int(mpi[end])
            if nxt in visited:
                break
            acc += float(mp[end])
            if not acc < threshold:
                break
            hops += 1
            arcs.append(Arc(src=src, dst=nxt, chain_distance=acc, hop_count=hops))
            visited.add(nxt)
            end = nxt

    return ArcSet(arcs=_dedupe(arcs), spec=profile.spec)


def extract_wcac(profile: ProfilePair, arcs: ArcSet) -> ShapeCurve:
    """Weighted chained arc curve over the profile's time ticks.

    Each arc contributes ``chain_distance / (|src - dst| / num_ticks)`` to
    every tick its span covers, so short-range links dominate and links
    reaching across unrelated regimes are discounted by their span.
    """
    num_ticks = profile.num_windows
    spans = [a.span for a in arcs.arcs]
    weights = [a.chain_distance * num_ticks / (a.span[1] - a.span[0]) for a in arcs.arcs]
    values = _accumulate(spans, weights, num_ticks)
    values.setflags(write=False)
    return ShapeCurve(values=values, kind="WCAC", spec=profile.spec)


def smooth_curve(values: np.ndarray, width: int) -> np.ndarray:
    """Centered moving average with edge-shrunk windows; width 1 is a no-op."""
    if width <= 1:
        return np.asarray(values, dtype=float)
    values = np.asarray(values, dtype=float)
    n = len(values)
    half = width // 2
    csum = np.concatenate(([0.0], np.cumsum(values)))
    idx = np.arange(n)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half, n - 1)
    return (csum[hi + 1] - csum[lo]) / (hi - lo + 1)


def _minima_runs(values: np.ndarray) -> list[int]:
    """First indices of strict-interior local-minimum plateaus."""
    n = len(values)
    minima = []
    start = 0
    while start < n:
        end = start
        while end + 1 < n and values[end + 1] == values[start]:
            end += 1
        left_ok = start > 0 and values[start - 1] > values[start]
        right_ok = end < n - 1 and values[end + 1] > values[start]
        if left_ok and right_ok:
            minima.append(start)
        start = end + 1
    return minima


def find_candidates(curve: ShapeCurve, cfg: CandidateConfig = CandidateConfig()) -> list[int]:
    """Change-point candidates: thinned local minima of the smoothed curve.

    The curve is smoothed, strict local minima are found (plateaus report
    their first index), candidates within ``margin`` of either end are
    dropped, and remaining candidates are greedily thinned to be at least
    ``min_gap`` apart, keeping the lower-valued one (ties toward the
    smaller index). The result is sorted ascending and deterministic.

    Raises
    ------
    NoCandidates
        If no local minimum survives the margin filter.
    """
    if len(curve) == 0:
        raise NoCandidates("empty curve")
    width, margin, min_gap = cfg.resolve(curve.spec.length)
    smoothed = smooth_curve(curve.values, width)

    minima = [c for c in _minima_runs(smoothed) if margin <= c <= len(smoothed) - 1 - margin]
    if not minima:
        raise NoCandidates("no local minima outside the end margins")

    kept: list[int] = []
    for c in sorted(minima, key=lambda c: (smoothed[c], c)):
        if all(abs(c - k) >= min_gap for k in kept):
            kept.append(c)
    return sorted(kept)
