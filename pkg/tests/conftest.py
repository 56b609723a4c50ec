"""
Shared fixtures and the ``slow`` marker for Monte-Carlo acceptance runs.

Slow tests are skipped unless pytest is started with ``--runslow``.
"""

import pytest

from admm_lab.config import Config
from admm_lab.instances import MatrixEnsemble, SignalPrior, generate_instance, make_rng


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow Monte-Carlo acceptance tests"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte-Carlo run, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

@pytest.fixture
def sparse_instance():
    """N=60, M=48 Bernoulli-Gaussian instance."""
    return generate_instance(
        SignalPrior.bernoulli_gaussian(0.8),
        MatrixEnsemble.GAUSSIAN_IID,
        60,
        0.8,
        0.001,
        make_rng(11, 0, 0),
    )


@pytest.fixture
def binary_instance():
    """N=60, M=48 ±1 instance."""
    return generate_instance(
        SignalPrior.binary(),
        MatrixEnsemble.GAUSSIAN_IID,
        60,
        0.8,
        0.04,
        make_rng(12, 0, 0),
    )


@pytest.fixture
def config(tmp_path):
    """Config that ignores the environment and any .env file."""
    return Config(output_dir=str(tmp_path), workers=2, log_level="WARNING", load_env_file=False)
