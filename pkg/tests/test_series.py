import numpy as np
import pytest

from espresso_seg import (
    EmptyInput,
    NonFinite,
    OutOfRange,
    RaggedChannels,
    SubseqSpec,
    ValidationError,
    subsequence,
    validate_series,
)


def test_single_channel_passthrough():
    s = validate_series([1, 2, 3, 4])
    assert s.n_channels == 1
    assert s.n_samples == 4
    assert np.array_equal(s.data, [[1.0, 2.0, 3.0, 4.0]])


def test_nan_reports_channel_and_index():
    raw = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, np.nan]])
    with pytest.raises(NonFinite) as exc:
        validate_series(raw)
    assert exc.value.channel == 1
    assert exc.value.index == 2


def test_inf_rejected():
    with pytest.raises(NonFinite):
        validate_series([[1.0, np.inf]])


def test_ragged_channels():
    with pytest.raises(RaggedChannels):
        validate_series([[1, 2, 3, 4, 5], [1, 2, 3, 4, 5, 6]])


def test_empty_input():
    with pytest.raises(EmptyInput):
        validate_series(np.zeros((0, 10)))
    with pytest.raises(EmptyInput):
        validate_series([[1.0]])


def test_validate_idempotent():
    s = validate_series([[1, 2, 3], [4, 5, 6]], channel_names=["a", "b"])
    assert validate_series(s) == s


def test_channel_names_default_and_explicit():
    s = validate_series([[1, 2], [3, 4]])
    assert s.channel_names == ("ch0", "ch1")
    named = validate_series([[1, 2]], channel_names=["acc_x"])
    assert named.channel_names == ("acc_x",)
    with pytest.raises(ValidationError):
        validate_series([[1, 2]], channel_names=["a", "b"])


def test_data_is_readonly():
    s = validate_series([[1, 2, 3]])
    with pytest.raises(ValueError):
        s.data[0, 0] = 9.0


def test_subsequence_basic():
    s = validate_series([0, 1, 2, 3, 4])
    spec = SubseqSpec(length=3, exclusion_radius=1)
    assert np.array_equal(subsequence(s, 0, 1, spec), [1, 2, 3])
    assert np.array_equal(subsequence(s, 0, 2, spec), [2, 3, 4])  # start = N - L


def test_subsequence_out_of_range():
    s = validate_series([0, 1, 2, 3, 4])
    spec = SubseqSpec(length=3, exclusion_radius=1)
    with pytest.raises(OutOfRange):
        subsequence(s, 0, 3, spec)  # N - L + 1
    with pytest.raises(OutOfRange):
        subsequence(s, 0, -1, spec)
    with pytest.raises(OutOfRange):
        subsequence(s, 1, 0, spec)


def test_subsequence_reconstructs_channel():
    rng = np.random.default_rng(3)
    x = rng.normal(size=23)
    s = validate_series(x)
    spec = SubseqSpec(length=7)
    head = subsequence(s, 0, 0, spec)
    rebuilt = np.concatenate([head, x[spec.length :]])
    assert np.array_equal(rebuilt, x)
    for start in range(s.n_samples - spec.length + 1):
        assert len(subsequence(s, 0, start, spec)) == spec.length


def test_spec_defaults_and_validation():
    assert SubseqSpec(length=5).exclusion_radius == 3
    assert SubseqSpec(length=4).exclusion_radius == 2
    with pytest.raises(ValidationError):
        SubseqSpec(length=1)
    with pytest.raises(ValidationError):
        SubseqSpec(length=4, exclusion_radius=0)
