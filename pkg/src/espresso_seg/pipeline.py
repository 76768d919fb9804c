"""End-to-end segmentation: shape candidates, entropy search, channel ranking.

The hybrid flow profiles each channel, builds its weighted chained arc
curve, extracts candidate change points from the curve's minima, then runs
the greedy information-gain search over the full multivariate series once
per candidate set. Channels are ranked by the final gain their candidates
achieved (equivalently, minimal residual entropy) and the winning
channel's segmentation is returned.

Ablation modes mirror the method's two halves: ``shape_only`` reads
boundaries straight off the shape curve (the ``k - 1`` lowest-valued
candidates), ``entropy_only`` searches a dense regular grid instead of
shape candidates.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

from .curve import (
    CandidateConfig,
    ChainConfig,
    ShapeCurve,
    arc_curve,
    extract_cac,
    extract_wcac,
    find_candidates,
    smooth_curve,
)
from .entropy import EntropyView, Segmentation, StopRule, greedy_entropy_seg
from .errors import NoCandidates, PipelineFallbackWarning, ValidationError
from .profile import METRICS, compute_profile
from .series import MultiSeries, SubseqSpec

MODES = ("hybrid", "shape_only", "entropy_only")
CURVE_KINDS = ("wcac", "ac")
DENSE = "dense"
POOLED = "pooled"


@dataclass(frozen=True)
class PipelineConfig:
    """Everything the pipeline needs besides the data.

    The window length inside ``spec`` is the one parameter worth tuning;
    the rest default to data-adaptive values.
    """

    spec: SubseqSpec
    mode: str = "hybrid"
    stop: StopRule = field(default_factory=StopRule.auto)
    chain_beta: float = 2.0
    chain_threshold: float | None = None
    smoothing_width: int | None = None
    margin: int | None = None
    min_gap: int | None = None
    distance_kind: str = "znorm"
    curve_kind: str = "wcac"
    dense_grid_step: int = 1
    pool_candidates: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.distance_kind not in METRICS:
            raise ValidationError(f"distance_kind must be one of {METRICS}, got {self.distance_kind!r}")
        if self.curve_kind not in CURVE_KINDS:
            raise ValidationError(f"curve_kind must be one of {CURVE_KINDS}, got {self.curve_kind!r}")
        if self.dense_grid_step < 1:
            raise ValidationError(f"dense_grid_step must be >= 1, got {self.dense_grid_step}")
        if self.chain_beta <= 0:
            raise ValidationError(f"chain_beta must be positive, got {self.chain_beta}")
        if self.mode == "shape_only" and self.stop.fixed_k is None:
            raise ValidationError("shape_only mode needs a fixed segment count (stop.fixed_k)")

    def candidate_config(self) -> CandidateConfig:
        return CandidateConfig(
            smoothing_width=self.smoothing_width, margin=self.margin, min_gap=self.min_gap
        )

    def chain_config(self) -> ChainConfig:
        return ChainConfig(threshold=self.chain_threshold, beta=self.chain_beta)


@dataclass(frozen=True)
class ChannelResult:
    """One channel's candidates and how well its search did.

    ``candidates`` are sample positions (curve ticks mapped to window
    centers), i.e. exactly the set the boundary search ran over.
    ``score`` is the final information gain in hybrid and entropy modes
    (higher is better) and the mean curve depth of the selected minima in
    shape-only mode (lower is better).
    """

    channel: int | str
    candidates: tuple[int, ...]
    score: float
    segmentation: Segmentation | None = None


@dataclass
class PipelineResult:
    segmentation: Segmentation
    per_channel: list[ChannelResult]
    curves: dict[int, ShapeCurve] | None
    timing: dict[str, float]
    mode: str


def rank_channels(per_channel: list[ChannelResult]) -> list[int | str]:
    """Channel ids ordered by final information gain, best first.

    Equal gains resolve toward the smaller channel index, so ranking is
    deterministic and permutation-equivariant.
    """
    if not per_channel:
        raise ValidationError("need at least one channel result")
    order = sorted(per_channel, key=lambda r: (-r.score, _channel_key(r.channel)))
    return [r.channel for r in order]


def _channel_key(channel: int | str):
    return (0, channel, "") if isinstance(channel, int) else (1, -1, channel)


def _dense_grid(n_samples: int, step: int) -> list[int]:
    grid = list(range(step, n_samples, step))
    if not grid:
        raise NoCandidates(f"grid step {step} leaves no interior candidate for N={n_samples}")
    return grid


def _ticks_to_samples(ticks: list[int], n_samples: int, length: int) -> list[int]:
    """Map curve ticks to boundary positions at the window centers.

    A tick indexes a window's start; the shape change it signals sits in
    the middle of the window, so raw ticks land about half a window early.
    """
    half = length // 2
    return sorted({min(max(t + half, 1), n_samples - 1) for t in ticks})


def run_espresso(series: MultiSeries, cfg: PipelineConfig) -> PipelineResult:
    """Run the configured segmentation pipeline over a validated series.

    Hybrid mode degrades to the dense-grid entropy search (with a
    :class:`PipelineFallbackWarning`) when no channel yields any shape
    candidate. Identical inputs produce identical results; per-channel
    stages only read shared immutable data, so they are safe to
    parallelize externally.
    """
    t_start = time.perf_counter()
    timing = {"profile": 0.0, "curve": 0.0, "candidates": 0.0, "search": 0.0}
    view = EntropyView.from_series(series)

    if cfg.mode == "entropy_only":
        result = _run_dense(series, view, cfg, timing, DENSE)
        timing["total"] = time.perf_counter() - t_start
        result.timing = timing
        return result

    curves: dict[int, ShapeCurve] = {}
    channel_candidates: dict[int, list[int]] = {}
    for j in range(series.n_channels):
        t0 = time.perf_counter()
        profile = compute_profile(series, j, cfg.spec, metric=cfg.distance_kind)
        t1 = time.perf_counter()
        if cfg.curve_kind == "ac":
            curve = arc_curve(profile)
        else:
            curve = extract_wcac(profile, extract_cac(profile, cfg.chain_config()))
        t2 = time.perf_counter()
        try:
            cands = find_candidates(curve, cfg.candidate_config())
        except NoCandidates:
            cands = None
        t3 = time.perf_counter()
        timing["profile"] += t1 - t0
        timing["curve"] += t2 - t1
        timing["candidates"] += t3 - t2
        if cands is not None:
            channel_candidates[j] = _ticks_to_samples(cands, series.n_samples, cfg.spec.length)
            curves[j] = curve.with_candidates(cands)
        else:
            curves[j] = curve

    if not channel_candidates:
        warnings.warn(
            "no channel produced shape candidates; falling back to the dense grid",
            PipelineFallbackWarning,
            stacklevel=2,
        )
        result = _run_dense(series, view, cfg, timing, DENSE)
        result.curves = curves
        timing["total"] = time.perf_counter() - t_start
        result.timing = timing
        return result

    t_search = time.perf_counter()
    if cfg.mode == "hybrid":
        result = _run_hybrid(view, cfg, channel_candidates)
    else:
        result = _run_shape_only(cfg, series, curves, channel_candidates)
    timing["search"] += time.perf_counter() - t_search
    result.curves = curves
    timing["total"] = time.perf_counter() - t_start
    result.timing = timing
    return result


def _run_dense(series, view, cfg, timing, source) -> PipelineResult:
    t0 = time.perf_counter()
    grid = _dense_grid(series.n_samples, cfg.dense_grid_step)
    seg = greedy_entropy_seg(view, grid, cfg.stop)
    timing["search"] += time.perf_counter() - t0
    score = seg.ig_trace[-1] if seg.ig_trace else 0.0
    entry = ChannelResult(channel=source, candidates=tuple(grid), score=score, segmentation=seg)
    return PipelineResult(
        segmentation=seg.with_source(source),
        per_channel=[entry],
        curves=None,
        timing=timing,
        mode=cfg.mode,
    )


def _run_hybrid(view, cfg, channel_candidates) -> PipelineResult:
    per_channel: list[ChannelResult] = []
    if cfg.pool_candidates:
        pooled = sorted(set().union(*channel_candidates.values()))
        seg = greedy_entropy_seg(view, pooled, cfg.stop)
        score = seg.ig_trace[-1] if seg.ig_trace else 0.0
        per_channel.append(
            ChannelResult(channel=POOLED, candidates=tuple(pooled), score=score, segmentation=seg)
        )
        winner = per_channel[0]
    else:
        for j, cands in channel_candidates.items():
            seg = greedy_entropy_seg(view, cands, cfg.stop)
            score = seg.ig_trace[-1] if seg.ig_trace else 0.0
            per_channel.append(
                ChannelResult(channel=j, candidates=tuple(cands), score=score, segmentation=seg)
            )
        best = rank_channels(per_channel)[0]
        winner = next(r for r in per_channel if r.channel == best)
    return PipelineResult(
        segmentation=winner.segmentation.with_source(winner.channel),
        per_channel=per_channel,
        curves=None,
        timing={},
        mode=cfg.mode,
    )


def _run_shape_only(cfg, series, curves, channel_candidates) -> PipelineResult:
    n_boundaries = cfg.stop.fixed_k - 1
    width, _, _ = cfg.candidate_config().resolve(cfg.spec.length)
    per_channel: list[ChannelResult] = []
    for j, cands in channel_candidates.items():
        ticks = curves[j].candidates
        smoothed = smooth_curve(curves[j].values, width)
        ranked = sorted(ticks, key=lambda c: (smoothed[c], c))
        chosen_ticks = ranked[:n_boundaries]
        depth = float(sum(smoothed[c] for c in chosen_ticks) / len(chosen_ticks)) if chosen_ticks else 0.0
        chosen = _ticks_to_samples(chosen_ticks, series.n_samples, cfg.spec.length)
        seg = Segmentation(boundaries=tuple(chosen), ig_trace=())
        per_channel.append(
            ChannelResult(channel=j, candidates=tuple(cands), score=depth, segmentation=seg)
        )
    winner = min(per_channel, key=lambda r: (r.score, _channel_key(r.channel)))
    return PipelineResult(
        segmentation=winner.segmentation.with_source(winner.channel),
        per_channel=per_channel,
        curves=None,
        timing={},
        mode=cfg.mode,
    )
