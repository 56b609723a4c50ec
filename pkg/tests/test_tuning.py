"""
Tests for parameter selection from predicted trajectories.
"""

import pytest

from admm_lab import tuning
from admm_lab.exceptions import ValidationError
from admm_lab.instances import SignalPrior
from admm_lab.prediction import PredictionConfig, PredictionRecord, PredictionTrajectory
from admm_lab.regularizers import L1
from admm_lab.tuning import iterations_to_plateau, select_lambda, select_rho


def _trajectory(mses):
    records = [
        PredictionRecord(
            k=k,
            alpha_star=1.0,
            beta_star=1.0,
            saddle_value=0.0,
            predicted_mse_corollary=m,
            predicted_mse_corollary_raw=m,
            predicted_mse_ensemble=m,
        )
        for k, m in enumerate(mses, start=1)
    ]
    return PredictionTrajectory(records=records, particles=10)


def _fake_predictor(table, key):
    """predict_trajectory stand-in returning canned MSE series keyed by lambda or rho."""
    calls = []

    def fake(prior, reg, lam, delta, sigma_v2, rho, iters, config):
        calls.append((lam, rho))
        return _trajectory(table[lam if key == 'lambda' else rho])

    return fake, calls


def test_iterations_to_plateau_example():
    assert iterations_to_plateau([10.0, 5.0, 2.0, 1.02, 1.0], 0.05) == 4


def test_iterations_to_plateau_constant_series():
    assert iterations_to_plateau([0.3, 0.3, 0.3]) == 1


def test_iterations_to_plateau_empty():
    with pytest.raises(ValidationError):
        iterations_to_plateau([])


def test_select_lambda_picks_smallest_final_mse(monkeypatch):
    table = {0.01: [0.5, 0.3, 0.2], 0.05: [0.5, 0.2, 0.1], 0.2: [0.5, 0.4, 0.3]}
    fake, calls = _fake_predictor(table, 'lambda')
    monkeypatch.setattr(tuning, 'predict_trajectory', fake)

    selection = select_lambda(
        SignalPrior.bernoulli_gaussian(0.8), L1(), 0.9, 0.001, 0.1, [0.01, 0.05, 0.2], 3, PredictionConfig()
    )
    assert selection.best == 0.05
    assert selection.parameter == 'lambda'
    assert [c.value for c in selection.candidates] == [0.01, 0.05, 0.2]
    assert [lam for lam, _ in calls] == [0.01, 0.05, 0.2]
    assert selection.to_dict()['candidates'][1]['final_mse'] == 0.1


def test_select_rho_prefers_fast_plateau(monkeypatch):
    table = {
        0.05: [1.0, 0.8, 0.6, 0.4, 0.2],
        0.2: [1.0, 0.21, 0.2, 0.2, 0.2],
        0.5: [1.0, 0.5, 0.3, 0.2, 0.2],
    }
    fake, _ = _fake_predictor(table, 'rho')
    monkeypatch.setattr(tuning, 'predict_trajectory', fake)

    selection = select_rho(
        SignalPrior.bernoulli_gaussian(0.9), L1(), 0.1, 0.8, 0.005, [0.05, 0.2, 0.5], 5, PredictionConfig()
    )
    assert selection.best == 0.2
    plateaus = {c.value: c.plateau_iteration for c in selection.candidates}
    assert plateaus == {0.05: 5, 0.2: 2, 0.5: 4}


def test_select_requires_candidates():
    with pytest.raises(ValidationError):
        select_lambda(SignalPrior.binary(), L1(), 0.9, 0.001, 0.1, [], 3, PredictionConfig())
    with pytest.raises(ValidationError):
        select_rho(SignalPrior.binary(), L1(), 0.1, 0.9, 0.001, [], 3, PredictionConfig())
