"""
Tests for priors, instance generation and error metrics.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from admm_lab.exceptions import DimensionMismatchError, NonBinarySignalError, ValidationError
from admm_lab.instances import (
    MatrixEnsemble,
    SignalPrior,
    empirical_cdf,
    generate_instance,
    make_rng,
    measurement_count,
    mse,
    sample_matrix,
    sample_signal,
    ser,
    sign_decision,
)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


# ---------------------------------------------------------------------------
# Random streams
# ---------------------------------------------------------------------------

def test_make_rng_is_reproducible():
    a = make_rng(5, 0, 3).standard_normal(8)
    b = make_rng(5, 0, 3).standard_normal(8)
    np.testing.assert_array_equal(a, b)


def test_make_rng_streams_are_distinct():
    a = make_rng(5, 0, 3).standard_normal(8)
    b = make_rng(5, 0, 4).standard_normal(8)
    c = make_rng(5, 1).standard_normal(8)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_make_rng_rejects_negative_seed():
    with pytest.raises(ValidationError):
        make_rng(-1)


# ---------------------------------------------------------------------------
# Priors and sampling
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("p0", [0.0, 1.0, -0.1, 1.5, None])
def test_bernoulli_gaussian_rejects_bad_p0(p0):
    with pytest.raises(ValidationError):
        SignalPrior.bernoulli_gaussian(p0)


def test_binary_prior_takes_no_p0():
    from admm_lab.instances import PriorKind

    with pytest.raises(ValidationError):
        SignalPrior(PriorKind.BINARY_PM1, 0.5)


def test_second_moment():
    assert SignalPrior.binary().second_moment == 1.0
    assert SignalPrior.bernoulli_gaussian(0.8).second_moment == pytest.approx(0.2)


def test_binary_signal_is_pm1():
    x = sample_signal(SignalPrior.binary(), 1000, make_rng(1))
    assert set(np.unique(x)) == {-1.0, 1.0}


def test_sparse_signal_zero_fraction_matches_p0():
    x = sample_signal(SignalPrior.bernoulli_gaussian(0.9), 40_000, make_rng(2))
    assert np.mean(x == 0.0) == pytest.approx(0.9, abs=0.01)


def test_gaussian_matrix_entry_variance():
    A = sample_matrix(MatrixEnsemble.GAUSSIAN_IID, 200, 400, make_rng(3))
    assert A.shape == (200, 400)
    assert np.var(A) == pytest.approx(1.0 / 400, rel=0.02)


def test_bernoulli_matrix_entries():
    A = sample_matrix(MatrixEnsemble.BERNOULLI_PM, 30, 100, make_rng(4))
    np.testing.assert_allclose(np.abs(A), 0.1)


@pytest.mark.parametrize("ensemble", list(MatrixEnsemble))
@pytest.mark.parametrize("seed", range(10))
def test_matrix_spectrum_in_marchenko_pastur_band(ensemble, seed):
    A = sample_matrix(ensemble, 400, 500, make_rng(seed, 7))
    edge = (1.0 + np.sqrt(0.8)) ** 2
    top = np.linalg.norm(A, 2) ** 2
    assert 0.85 * edge <= top <= 1.15 * edge
    assert (A ** 2).sum() / 400 == pytest.approx(1.0, rel=0.05)


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n, delta, expected", [(500, 0.9, 450), (1000, 0.9, 900), (10, 0.25, 3), (500, 0.5, 250)])
def test_measurement_count(n, delta, expected):
    assert measurement_count(n, delta) == expected


def test_generate_instance_shapes_and_model():
    inst = generate_instance(
        SignalPrior.bernoulli_gaussian(0.8), MatrixEnsemble.GAUSSIAN_IID, 50, 0.6, 0.01, make_rng(0)
    )
    assert inst.x.shape == (50,)
    assert inst.A.shape == (30, 50)
    assert inst.v.shape == (30,)
    assert inst.delta == pytest.approx(0.6)
    np.testing.assert_allclose(inst.y, inst.A @ inst.x + inst.v)
    np.testing.assert_allclose(inst.aty, inst.A.T @ inst.y)


def test_generate_instance_noiseless():
    inst = generate_instance(SignalPrior.binary(), MatrixEnsemble.GAUSSIAN_IID, 20, 0.5, 0.0, make_rng(0))
    np.testing.assert_array_equal(inst.v, np.zeros(10))
    assert inst.is_binary


def test_generate_instance_is_deterministic():
    args = (SignalPrior.binary(), MatrixEnsemble.BERNOULLI_PM, 40, 0.7, 0.04)
    a = generate_instance(*args, make_rng(9, 0, 1))
    b = generate_instance(*args, make_rng(9, 0, 1))
    np.testing.assert_array_equal(a.A, b.A)
    np.testing.assert_array_equal(a.y, b.y)


def test_generate_instance_rejects_tiny_delta():
    with pytest.raises(ValidationError):
        generate_instance(SignalPrior.binary(), MatrixEnsemble.GAUSSIAN_IID, 10, 0.05, 0.0, make_rng(0))


def test_generate_instance_rejects_negative_noise():
    with pytest.raises(ValidationError):
        generate_instance(SignalPrior.binary(), MatrixEnsemble.GAUSSIAN_IID, 10, 0.5, -0.1, make_rng(0))


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

def test_mse_example():
    assert mse([1.0, 2.0], [1.0, 0.0]) == pytest.approx(2.0)


def test_sign_of_zero_is_plus_one():
    np.testing.assert_array_equal(sign_decision(np.array([0.0, -0.0, -2.0, 3.0])), [1.0, 1.0, -1.0, 1.0])


def test_ser_counts_mismatches():
    assert ser([0.0, -0.5, 0.3, 0.9], [1.0, 1.0, -1.0, 1.0]) == pytest.approx(0.5)


def test_ser_requires_binary_signal():
    with pytest.raises(NonBinarySignalError):
        ser([0.1, 0.2], [0.0, 1.0])


def test_metrics_check_lengths():
    with pytest.raises(DimensionMismatchError):
        mse([1.0, 2.0], [1.0])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(finite, st.sampled_from([-1.0, 1.0])), min_size=1, max_size=40), st.randoms())
def test_metrics_are_permutation_invariant(pairs, random):
    s = np.array([p[0] for p in pairs])
    x = np.array([p[1] for p in pairs])
    order = list(range(len(pairs)))
    random.shuffle(order)
    assert mse(s[order], x[order]) == pytest.approx(mse(s, x))
    assert ser(s[order], x[order]) == ser(s, x)


def test_empirical_cdf_example():
    cdf = empirical_cdf([0.0, 1.0, 2.0], [-1.0, 0.0, 0.5, 2.0, 3.0])
    np.testing.assert_allclose(cdf, [0.0, 0.0, 1 / 3, 2 / 3, 1.0])


def test_empirical_cdf_errors():
    with pytest.raises(ValidationError):
        empirical_cdf([], [0.0, 1.0])
    with pytest.raises(ValidationError):
        empirical_cdf([0.0], [1.0, 0.0])


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(1, 60), elements=finite))
def test_empirical_cdf_is_monotone_in_unit_interval(values):
    grid = np.linspace(-1e3 - 1, 1e3 + 1, 101)
    cdf = empirical_cdf(values, grid)
    assert np.all(np.diff(cdf) >= 0)
    assert cdf[0] == 0.0
    assert cdf[-1] == 1.0
