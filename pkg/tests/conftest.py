import numpy as np
import pytest

from espresso_seg import validate_series


@pytest.fixture
def two_phase():
    """Two channels trading activity at the midpoint; boundary = 60."""
    n = 120
    ch0 = np.r_[np.full(n // 2, 2.0), np.zeros(n // 2)]
    ch1 = np.r_[np.zeros(n // 2), np.full(n // 2, 2.0)]
    return validate_series(np.vstack([ch0, ch1])), n // 2


def ranking_series(seed, n=2400, p1=10.0, p2=14.0):
    """Structured motif channel with one motif change plus a white-noise channel."""
    rng = np.random.default_rng(seed)
    b = int(rng.integers(int(0.35 * n), int(0.65 * n)))
    t = np.arange(n, dtype=float)
    ch0 = np.where(
        t < b,
        1.2 + 0.5 * np.sin(2 * np.pi * t / p1),
        3.2 + 0.5 * np.sin(2 * np.pi * t / p2),
    )
    ch0 = ch0 + rng.normal(0.0, 0.03, n)
    ch1 = rng.normal(0.0, 1.0, n)
    return validate_series(np.vstack([ch0, ch1])), [b]
