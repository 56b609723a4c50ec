"""
Tests for package initialization.
"""

import admm_lab


def test_version():
    """Test that version is available."""
    assert hasattr(admm_lab, '__version__')
    assert admm_lab.__version__ == "0.1.0"


def test_imports():
    """Test that main classes can be imported."""
    from admm_lab import ExperimentRunner, AdmmLabException, OptimumAtBoundaryError

    assert ExperimentRunner is not None
    assert AdmmLabException is not None
    assert issubclass(OptimumAtBoundaryError, AdmmLabException)


def test_all_names_resolve():
    for name in admm_lab.__all__:
        assert hasattr(admm_lab, name), name
