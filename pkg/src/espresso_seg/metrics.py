"""Boundary-set evaluation: windowed F-score, normalized RMSE, and MAE.

Every metric starts from the same one-to-one matching so clustered
estimates cannot inflate scores: ground-truth boundaries and estimates are
paired greedily by globally smallest absolute error, and each index on
either side is used at most once. Error metrics cover every ground-truth
boundary; when estimates are scarcer than truths, the leftover truths fall
back to their nearest estimate with reuse allowed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyEstimateWarning, ValidationError


@dataclass(frozen=True)
class EvalReport:
    """Matched boundary pairs and the scores of one (truth, estimate) comparison."""

    matches: tuple[tuple[int, int, int], ...]
    f_score: float
    precision: float
    recall: float
    rmse_norm: float
    mae_samples: float
    window_samples: int
    n_gt: int = 0
    n_est: int = 0

    def to_dict(self) -> dict:
        return {
            "matches": [list(m) for m in self.matches],
            "f_score": self.f_score,
            "precision": self.precision,
            "recall": self.recall,
            "rmse_norm": self.rmse_norm,
            "mae_samples": self.mae_samples,
            "window_samples": self.window_samples,
            "n_gt": self.n_gt,
            "n_est": self.n_est,
        }


def _as_sorted_unique(values, name: str) -> list[int]:
    out = sorted({int(v) for v in values})
    if any(v < 0 for v in out):
        raise ValidationError(f"{name} boundaries must be non-negative")
    return out


def match_boundaries(gt, est) -> list[tuple[int, int, int]]:
    """One-to-one (truth, estimate, |error|) pairs by globally smallest error.

    Pairs are taken smallest-error first (ties toward the smaller truth,
    then the smaller estimate) until one side is exhausted, so each truth
    maps to at most one estimate and vice versa.
    """
    gt = _as_sorted_unique(gt, "ground-truth")
    est = _as_sorted_unique(est, "estimated")
    pairs = sorted((abs(g - e), g, e) for g in gt for e in est)
    used_gt: set[int] = set()
    used_est: set[int] = set()
    matches = []
    for err, g, e in pairs:
        if g in used_gt or e in used_est:
            continue
        matches.append((g, e, err))
        used_gt.add(g)
        used_est.add(e)
    return matches


def f_score(gt, est, window_samples: int) -> tuple[float, float, float]:
    """(F, precision, recall) counting a match as a hit when its error fits the window."""
    if window_samples < 0:
        raise ValidationError(f"window must be >= 0, got {window_samples}")
    gt = _as_sorted_unique(gt, "ground-truth")
    est = _as_sorted_unique(est, "estimated")
    tp = sum(1 for _, _, err in match_boundaries(gt, est) if err <= window_samples)
    precision = tp / len(est) if est else 0.0
    recall = tp / len(gt) if gt else 0.0
    if precision + recall == 0.0:
        return 0.0, precision, recall
    return 2.0 * precision * recall / (precision + recall), precision, recall


def _errors_per_gt(gt: list[int], est: list[int]) -> list[int]:
    """Absolute error for every truth: one-to-one first, nearest-with-reuse for leftovers."""
    matched = {g: err for g, _, err in match_boundaries(gt, est)}
    errors = []
    for g in gt:
        if g in matched:
            errors.append(matched[g])
        else:
            errors.append(min(abs(g - e) for e in est))
    return errors


def rmse_norm(gt, est, n_samples: int) -> float:
    """Root-mean-square boundary error over truths, divided by the series length.

    An empty estimate list cannot be scored; it is reported as the
    saturated value 1.0 with an :class:`EmptyEstimateWarning`.
    """
    gt = _as_sorted_unique(gt, "ground-truth")
    est = _as_sorted_unique(est, "estimated")
    if not gt:
        raise ValidationError("rmse_norm needs at least one ground-truth boundary")
    if not est:
        warnings.warn("empty estimate list; reporting rmse_norm = 1.0", EmptyEstimateWarning, stacklevel=2)
        return 1.0
    errors = _errors_per_gt(gt, est)
    return float(math.sqrt(np.mean(np.square(errors, dtype=float))) / n_samples)


def mae(gt, est) -> float:
    """Mean absolute boundary error, in samples, over ground-truth boundaries.

    An empty estimate list is reported as ``inf`` with an
    :class:`EmptyEstimateWarning`.
    """
    gt = _as_sorted_unique(gt, "ground-truth")
    est = _as_sorted_unique(est, "estimated")
    if not gt:
        raise ValidationError("mae needs at least one ground-truth boundary")
    if not est:
        warnings.warn("empty estimate list; reporting mae = inf", EmptyEstimateWarning, stacklevel=2)
        return math.inf
    return float(np.mean(_errors_per_gt(gt, est)))


def evaluate(gt, est, n_samples: int, window_samples: int) -> EvalReport:
    """Full report for one (truth, estimate) pair.

    With an empty estimate list the error metrics saturate (rmse 1.0, MAE
    equal to the series length) instead of being undefined.
    """
    gt = _as_sorted_unique(gt, "ground-truth")
    est = _as_sorted_unique(est, "estimated")
    matches = match_boundaries(gt, est)
    f, precision, recall = f_score(gt, est, window_samples)
    if est:
        rmse_val = rmse_norm(gt, est, n_samples)
        mae_val = mae(gt, est)
    else:
        warnings.warn("empty estimate list; error metrics saturated", EmptyEstimateWarning, stacklevel=2)
        rmse_val = 1.0
        mae_val = float(n_samples)
    return EvalReport(
        matches=tuple(matches),
        f_score=f,
        precision=precision,
        recall=recall,
        rmse_norm=rmse_val,
        mae_samples=mae_val,
        window_samples=int(window_samples),
        n_gt=len(gt),
        n_est=len(est),
    )


def window_to_samples(window_seconds: float, sample_rate_hz: float) -> int:
    """Convert a tolerance window from seconds to samples (rounded to nearest)."""
    if window_seconds < 0 or sample_rate_hz <= 0:
        raise ValidationError("window seconds must be >= 0 and rate positive")
    return int(round(window_seconds * sample_rate_hz))
