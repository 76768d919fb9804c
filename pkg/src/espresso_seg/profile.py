"""Per-channel nearest-neighbor profiles over sliding windows.

For every length-``L`` window the profile stores the distance to its most
similar window outside a trivial-match exclusion zone, together with that
neighbor's start index. The default metric is Euclidean distance between
z-normalized windows, so similarity is about shape rather than amplitude;
plain Euclidean distance is available behind ``metric="plain"``.

Two implementations share nothing but the normalization helper:
:func:`compute_profile` uses a sliding dot-product recurrence, while
:func:`brute_force_profile` normalizes every window and compares pairs
directly. The second exists as a test oracle for the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, SubseqTooLong, ValidationError
from .series import MultiSeries, SubseqSpec

# Relative tolerance under which a window counts as constant. Constant
# windows z-normalize to the zero vector, making distances bounded and
# symmetric instead of dividing by zero: constant-vs-constant is 0,
# constant-vs-anything-else is sqrt(L).
VARIANCE_GUARD = 1e-12

METRICS = ("znorm", "plain")


@dataclass(frozen=True)
class ProfilePair:
    """Distance profile ``mp`` and neighbor-index profile ``mpi`` for one channel."""

    mp: np.ndarray
    mpi: np.ndarray
    spec: SubseqSpec
    metric: str = "znorm"

    @property
    def num_windows(self) -> int:
        return len(self.mp)


def _is_constant(mean: np.ndarray | float, std: np.ndarray | float):
    return std < VARIANCE_GUARD * (1.0 + np.abs(mean))


def _znorm(v: np.ndarray) -> np.ndarray:
    """Zero-mean unit-variance copy of ``v``; constant vectors map to zeros."""
    mean = v.mean()
    std = v.std()
    if _is_constant(mean, std):
        return np.zeros_like(v, dtype=float)
    return (v - mean) / std


def znorm_distance(a, b) -> float:
    """Euclidean distance between the z-normalized copies of ``a`` and ``b``.

    The result lies in ``[0, 2 * sqrt(L)]``; z-normalization makes it
    invariant to affine rescaling of either input.

    Raises
    ------
    LengthMismatch
        If the vectors have different lengths.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise LengthMismatch(f"expected equal-length vectors, got shapes {a.shape} and {b.shape}")
    if len(a) < 2:
        raise ValidationError("window length must be >= 2")
    return float(np.linalg.norm(_znorm(a) - _znorm(b)))


def _window_stats(x: np.ndarray, length: int):
    """Mean, standard deviation, and constant-flag of every sliding window."""
    csum = np.concatenate(([0.0], np.cumsum(x)))
    csum2 = np.concatenate(([0.0], np.cumsum(x * x)))
    seg = csum[length:] - csum[:-length]
    seg2 = csum2[length:] - csum2[:-length]
    mean = seg / length
    var = np.maximum(seg2 / length - mean * mean, 0.0)
    std = np.sqrt(var)
    return mean, std, _is_constant(mean, std)


def _validate_window(n_samples: int, spec: SubseqSpec) -> int:
    """Window count, or an error when the profile is undefined.

    ``L <= N/2`` is required under the default exclusion radius
    ``ceil(L/2)``, which is exactly what keeps an admissible neighbor for
    every window; an explicitly narrower radius admits longer windows as
    long as two windows remain and nobody loses all neighbors.
    """
    num_windows = n_samples - spec.length + 1
    if num_windows < 2:
        raise SubseqTooLong(f"L={spec.length} leaves fewer than two windows for N={n_samples}")
    if spec.exclusion_radius == math.ceil(spec.length / 2) and 2 * spec.length > n_samples:
        raise SubseqTooLong(f"L={spec.length} exceeds half of N={n_samples}")
    mid = (num_windows - 1) // 2
    if spec.exclusion_radius > max(mid, num_windows - 1 - mid):
        raise ValidationError(
            f"exclusion radius {spec.exclusion_radius} leaves some window without any admissible neighbor"
        )
    return num_windows


def compute_profile(
    series: MultiSeries, channel: int, spec: SubseqSpec, metric: str = "znorm"
) -> ProfilePair:
    """Nearest-neighbor profile of one channel via a sliding dot-product recurrence.

    Deterministic: nearest-neighbor ties are broken toward the smallest
    index. Exact agreement with :func:`brute_force_profile` (1e-9 on
    distances, exact on indices) is the contract, not the algorithm.

    Raises
    ------
    SubseqTooLong
        If ``2 * L > N``.
    """
    if metric not in METRICS:
        raise ValidationError(f"metric must be one of {METRICS}, got {metric!r}")
    x = np.asarray(series.channel(channel), dtype=float)
    n = len(x)
    length = spec.length
    num_windows = _validate_window(n, spec)
    radius = spec.exclusion_radius

    mean, std, const = _window_stats(x, length)
    csum2 = np.concatenate(([0.0], np.cumsum(x * x)))
    sqsum = csum2[length:] - csum2[:-length]

    mp = np.empty(num_windows)
    mpi = np.empty(num_windows, dtype=np.int64)

    qt_first = np.correlate(x, x[:length], mode="valid")
    qt = qt_first.copy()
    for i in range(num_windows):
        if i > 0:
            qt[1:] = qt[: num_windows - 1] - x[: num_windows - 1] * x[i - 1] + x[length:] * x[i + length - 1]
            qt[0] = qt_first[i]

        if metric == "znorm":
            denom = length * std[i] * std
            with np.errstate(divide="ignore", invalid="ignore"):
                corr = (qt - length * mean[i] * mean) / denom
                d2 = 2.0 * length * (1.0 - corr)
            # constant-window conventions override whatever the formula produced
            if const[i]:
                d2 = np.where(const, 0.0, float(length))
            elif const.any():
                d2 = np.where(const, float(length), d2)
            np.maximum(d2, 0.0, out=d2)
        else:
            d2 = np.maximum(sqsum[i] + sqsum - 2.0 * qt, 0.0)

        lo = max(0, i - radius + 1)
        hi = min(num_windows, i + radius)
        d2[lo:hi] = np.inf

        j = int(np.argmin(d2))
        mpi[i] = j
        mp[i] = np.sqrt(d2[j])

    mp.setflags(write=False)
    mpi.setflags(write=False)
    return ProfilePair(mp=mp, mpi=mpi, spec=spec, metric=metric)


def brute_force_profile(
    series: MultiSeries, channel: int, spec: SubseqSpec, metric: str = "znorm"
) -> ProfilePair:
    """Reference profile: normalize every window, compare every admissible pair.

    O(N^2 * L) with no dot-product recurrences; shares only the
    z-normalization convention with :func:`compute_profile`. Intended as the
    oracle in tests, and usable directly on small inputs.
    """
    if metric not in METRICS:
        raise ValidationError(f"metric must be one of {METRICS}, got {metric!r}")
    x = np.asarray(series.channel(channel), dtype=float)
    length = spec.length
    num_windows = _validate_window(len(x), spec)
    radius = spec.exclusion_radius

    windows = np.lib.stride_tricks.sliding_window_view(x, length)
    if metric == "znorm":
        windows = np.stack([_znorm(w) for w in windows])

    mp = np.empty(num_windows)
    mpi = np.empty(num_windows, dtype=np.int64)
    for i in range(num_windows):
        diff = windows - windows[i]
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        dist[max(0, i - radius + 1) : i + radius] = np.inf
        j = int(np.argmin(dist))
        mpi[i] = j
        mp[i] = dist[j]

    mp.setflags(write=False)
    mpi.setflags(write=False)
    return ProfilePair(mp=mp, mpi=mpi, spec=spec, metric=metric)
