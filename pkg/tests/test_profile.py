import math

import numpy as np
import pytest

from espresso_seg import (
    LengthMismatch,
    SubseqSpec,
    SubseqTooLong,
    ValidationError,
    brute_force_profile,
    compute_profile,
    validate_series,
    znorm_distance,
)


class TestZnormDistance:
    def test_identical(self):
        assert znorm_distance([0, 1], [0, 1]) == 0.0

    def test_affine_pair_is_zero(self):
        # z-normalization removes offset and scale
        assert znorm_distance([0, 1], [5, 9]) == pytest.approx(0.0, abs=1e-12)

    def test_antialigned_is_maximal(self):
        # hand derivation: both normalize to +-sqrt(3/2) ramps, anti-aligned
        assert znorm_distance([1, 2, 3], [3, 2, 1]) == pytest.approx(2 * math.sqrt(3), rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            znorm_distance([1, 2, 3], [1, 2])

    def test_constant_conventions(self):
        assert znorm_distance([4, 4, 4], [7, 7, 7]) == 0.0
        assert znorm_distance([4, 4, 4], [1, 2, 4]) == pytest.approx(math.sqrt(3), rel=1e-12)

    def test_bound(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            length = int(rng.integers(2, 20))
            a, b = rng.normal(size=(2, length))
            assert 0.0 <= znorm_distance(a, b) <= 2 * math.sqrt(length) + 1e-9


class TestBruteForce:
    def test_periodic_channel_all_zero(self):
        s = validate_series([0, 1, 0, 1, 0, 1, 0, 1])
        p = brute_force_profile(s, 0, SubseqSpec(length=2))
        assert np.allclose(p.mp, 0.0, atol=1e-9)

    def test_constant_channel(self):
        s = validate_series([5, 5, 5, 5, 5, 5])
        p = brute_force_profile(s, 0, SubseqSpec(length=2))
        assert np.array_equal(p.mp, np.zeros(5))
        # ties break to the smallest admissible index
        assert np.array_equal(p.mpi, [1, 0, 0, 0, 0])

    def test_two_windows_are_mutual_neighbors(self):
        s = validate_series([0.0, 1.0, 2.0, 0.0])
        p = brute_force_profile(s, 0, SubseqSpec(length=3, exclusion_radius=1))
        assert np.array_equal(p.mpi, [1, 0])
        assert p.mp[0] == pytest.approx(p.mp[1])

    def test_anomalous_window_is_discord(self):
        # frozen from this oracle: corrupting the tail of an alternating motif
        # makes window 4 = [0, 1, 2] the unique worst-matched window
        s = validate_series([0, 1, 0, 1, 0, 1, 2, 0, 0])
        p = brute_force_profile(s, 0, SubseqSpec(length=3))
        assert int(np.argmax(p.mp)) == 4
        assert (p.mp > p.mp[4] - 1e-12).sum() == 1


class TestComputeProfile:
    def test_periodic_channel(self):
        s = validate_series([0, 1, 0, 1, 0, 1, 0, 1])
        p = compute_profile(s, 0, SubseqSpec(length=2))
        assert np.allclose(p.mp, 0.0, atol=1e-6)

    def test_subseq_too_long(self):
        s = validate_series([0, 1, 2, 3, 4])
        with pytest.raises(SubseqTooLong):
            compute_profile(s, 0, SubseqSpec(length=3))
        with pytest.raises(SubseqTooLong):
            brute_force_profile(s, 0, SubseqSpec(length=3))

    def test_exclusion_radius_leaving_no_neighbor(self):
        s = validate_series([0, 1, 2, 3, 4, 5])
        with pytest.raises(ValidationError):
            compute_profile(s, 0, SubseqSpec(length=2, exclusion_radius=5))

    def test_bad_metric(self):
        s = validate_series([0, 1, 2, 3])
        with pytest.raises(ValidationError):
            compute_profile(s, 0, SubseqSpec(length=2, exclusion_radius=1), metric="cosine")

    @pytest.mark.parametrize("metric", ["znorm", "plain"])
    def test_oracle_equivalence_sample(self, metric):
        rng = np.random.default_rng(11)
        for _ in range(25):
            n = int(rng.integers(20, 120))
            length = int(rng.choice([4, 8, 16]))
            if 2 * length > n:
                continue
            s = validate_series(rng.normal(size=n))
            spec = SubseqSpec(length=length)
            fast = compute_profile(s, 0, spec, metric=metric)
            slow = brute_force_profile(s, 0, spec, metric=metric)
            np.testing.assert_allclose(fast.mp, slow.mp, atol=1e-9)
            np.testing.assert_array_equal(fast.mpi, slow.mpi)

    def test_affine_invariance(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=90)
        spec = SubseqSpec(length=8)
        base = compute_profile(validate_series(x), 0, spec)
        scaled = compute_profile(validate_series(3.5 * x - 11.0), 0, spec)
        np.testing.assert_allclose(base.mp, scaled.mp, atol=1e-7)
        np.testing.assert_array_equal(base.mpi, scaled.mpi)

    def test_exclusion_zone_and_bounds(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = int(rng.integers(30, 100))
            length = int(rng.choice([4, 8]))
            spec = SubseqSpec(length=length)
            p = compute_profile(validate_series(rng.normal(size=n)), 0, spec)
            idx = np.arange(p.num_windows)
            assert (np.abs(p.mpi - idx) >= spec.exclusion_radius).all()
            assert (p.mp >= 0).all()
            assert (p.mp <= 2 * math.sqrt(length) + 1e-9).all()

    def test_anomaly_matches_oracle(self):
        s = validate_series([0, 1, 0, 1, 0, 1, 2, 0, 0])
        spec = SubseqSpec(length=3)
        fast = compute_profile(s, 0, spec)
        slow = brute_force_profile(s, 0, spec)
        np.testing.assert_allclose(fast.mp, slow.mp, atol=1e-9)
        np.testing.assert_array_equal(fast.mpi, slow.mpi)
        assert int(np.argmax(fast.mp)) == 4

    def test_constant_windows_match_oracle(self):
        # mixed constant and varying windows exercise both conventions
        x = np.r_[np.zeros(8), np.sin(np.arange(12)), np.full(8, 3.0)]
        s = validate_series(x)
        spec = SubseqSpec(length=4)
        fast = compute_profile(s, 0, spec)
        slow = brute_force_profile(s, 0, spec)
        np.testing.assert_allclose(fast.mp, slow.mp, atol=1e-9)
        np.testing.assert_array_equal(fast.mpi, slow.mpi)

    def test_plain_metric_sees_amplitude(self):
        x = np.r_[np.sin(np.arange(20)), 5 * np.sin(np.arange(20))]
        s = validate_series(x)
        spec = SubseqSpec(length=5)
        z = compute_profile(s, 0, spec, metric="znorm")
        plain = compute_profile(s, 0, spec, metric="plain")
        # scaling-invariant metric matches across halves; plain does not
        assert plain.mp.max() > z.mp.max() + 0.5
