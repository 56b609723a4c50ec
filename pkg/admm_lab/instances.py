"""
Random problem instances, signal priors and error metrics.

Both the empirical side (ADMM on a drawn instance) and the prediction side
(the particle ensemble) sample signals from the same ``SignalPrior`` and
score estimates with the same metrics, so the two can be compared directly.

Random streams are counter-based (Philox) and keyed by a master seed plus a
stream path, e.g. ``make_rng(seed, 0, trial)`` for empirical trial ``trial``.
Adding trials never perturbs the streams of existing ones.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .exceptions import DimensionMismatchError, NonBinarySignalError, ValidationError


# ============================================================================
# RANDOM STREAMS
# ============================================================================

EMPIRICAL_STREAM = 0
PREDICTION_STREAM = 1


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """
    Build an independent generator for ``(seed, *stream)``.

    Example:
        >>> rng = make_rng(7, EMPIRICAL_STREAM, 3)  # trial 3 of seed 7
    """
    if seed < 0:
        raise ValidationError(f"Seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(sequence))


# ============================================================================
# ENUMS
# ============================================================================

class PriorKind(str, Enum):
    """Signal prior families."""
    BERNOULLI_GAUSSIAN = "bernoulli_gaussian"  # p0 mass at zero, standard Gaussian otherwise
    BINARY_PM1 = "binary_pm1"                  # ±1 with probability 1/2 each


class MatrixEnsemble(str, Enum):
    """Measurement matrix ensembles, both with entry variance 1/N."""
    GAUSSIAN_IID = "gaussian_iid"
    BERNOULLI_PM = "bernoulli_pm"


# ============================================================================
# PRIORS
# ============================================================================

@dataclass(frozen=True)
class SignalPrior:
    """
    Distribution of the i.i.d. entries of the unknown signal.

    Use the presets rather than the constructor:
        >>> SignalPrior.bernoulli_gaussian(0.9)
        >>> SignalPrior.binary()
    """

    kind: PriorKind
    p0: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind == PriorKind.BERNOULLI_GAUSSIAN:
            if self.p0 is None or not 0.0 < self.p0 < 1.0:
                raise ValidationError(f"Bernoulli-Gaussian prior needs 0 < p0 < 1, got {self.p0!r}")
        elif self.p0 is not None:
            raise ValidationError("Binary prior takes no p0")

    @classmethod
    def bernoulli_gaussian(cls, p0: float) -> 'SignalPrior':
        """Sparse prior: zero with probability p0, N(0, 1) otherwise."""
        return cls(PriorKind.BERNOULLI_GAUSSIAN, p0)

    @classmethod
    def binary(cls) -> 'SignalPrior':
        """Uniform prior on {+1, -1}."""
        return cls(PriorKind.BINARY_PM1)

    @property
    def is_binary(self) -> bool:
        return self.kind == PriorKind.BINARY_PM1

    @property
    def second_moment(self) -> float:
        """E[X^2]."""
        if self.is_binary:
            return 1.0
        return 1.0 - self.p0

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return sample_signal(self, n, rng)


def sample_signal(prior: SignalPrior, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` i.i.d. entries from ``prior``."""
    if n < 1:
        raise ValidationError(f"Signal length must be positive, got {n}")
    if prior.is_binary:
        return 2.0 * rng.integers(0, 2, size=n).astype(np.float64) - 1.0
    support = rng.random(n) >= prior.p0
    values = rng.standard_normal(n)
    return np.where(support, values, 0.0)


def sample_matrix(
    ensemble: MatrixEnsemble,
    m: int,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw an ``m x n`` matrix whose entries have mean 0 and variance ``1/n``."""
    if m < 1 or n < 1:
        raise ValidationError(f"Matrix dimensions must be positive, got {m}x{n}")
    scale = 1.0 / np.sqrt(n)
    if ensemble == MatrixEnsemble.GAUSSIAN_IID:
        return rng.standard_normal((m, n)) * scale
    signs = 2.0 * rng.integers(0, 2, size=(m, n)).astype(np.float64) - 1.0
    return signs * scale


# ============================================================================
# INSTANCES
# ============================================================================

@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """
    One realization of ``y = A x + v``.

    Attributes:
        x: True signal, length N.
        A: Measurement matrix, M x N.
        v: Noise, length M.
        y: Measurements, length M.
        sigma_v2: Noise variance used to draw v.
    """

    x: np.ndarray
    A: np.ndarray
    v: np.ndarray
    y: np.ndarray
    sigma_v2: float
    prior: Optional[SignalPrior] = None

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def delta(self) -> float:
        return self.m / self.n

    @cached_property
    def aty(self) -> np.ndarray:
        """A^T y, reused by every s-update."""
        return self.A.T @ self.y

    @property
    def is_binary(self) -> bool:
        return bool(np.all(np.abs(self.x) == 1.0))


def measurement_count(n: int, delta: float) -> int:
    """M = round(delta * N), rounding halves up."""
    return int(np.floor(delta * n + 0.5))


def generate_instance(
    prior: SignalPrior,
    ensemble: MatrixEnsemble,
    n: int,
    delta: float,
    sigma_v2: float,
    rng: np.random.Generator,
) -> ProblemInstance:
    """
    Draw x, A and v (in that order from ``rng``) and form ``y = A x + v``.

    Raises:
        ValidationError: delta * n < 1 or a negative noise variance.
    """
    if delta <= 0 or delta * n < 1:
        raise ValidationError(f"Need delta > 0 and delta * n >= 1, got delta={delta}, n={n}")
    if sigma_v2 < 0:
        raise ValidationError(f"Noise variance must be non-negative, got {sigma_v2}")
    m = measurement_count(n, delta)

    x = sample_signal(prior, n, rng)
    A = sample_matrix(ensemble, m, n, rng)
    v = rng.standard_normal(m) * np.sqrt(sigma_v2)
    y = A @ x + v
    return ProblemInstance(x=x, A=A, v=v, y=y, sigma_v2=sigma_v2, prior=prior)


# ============================================================================
# METRICS
# ============================================================================

def _check_same_length(s: np.ndarray, x: np.ndarray) -> None:
    if s.shape != x.shape:
        raise DimensionMismatchError(
            f"Estimate has shape {s.shape}, signal has shape {x.shape}",
            expected=x.shape,
            actual=s.shape,
        )


def sign_decision(s: np.ndarray) -> np.ndarray:
    """Elementwise sign with sign(0) = +1."""
    return np.where(np.asarray(s) >= 0.0, 1.0, -1.0)


def mse(s: Sequence[float], x: Sequence[float]) -> float:
    """(1/N) ||s - x||^2."""
    s = np.asarray(s, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    _check_same_length(s, x)
    return float(np.mean((s - x) ** 2))


def ser(s: Sequence[float], x: Sequence[float]) -> float:
    """Fraction of entries with sign(s_n) != x_n, for a ±1 signal x."""
    s = np.asarray(s, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    _check_same_length(s, x)
    if not np.all(np.abs(x) == 1.0):
        raise NonBinarySignalError()
    return float(np.mean(sign_decision(s) != x))


def empirical_cdf(values: Sequence[float], grid: Sequence[float]) -> np.ndarray:
    """
    Fraction of ``values`` strictly below each grid point.

    Raises:
        ValidationError: empty ``values`` or a grid that is not strictly increasing.
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    grid = np.asarray(grid, dtype=np.float64).ravel()
    if values.size == 0:
        raise ValidationError("Cannot build an empirical CDF from no values")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValidationError("CDF grid must be strictly increasing")
    ordered = np.sort(values)
    return np.searchsorted(ordered, grid, side='left') / ordered.size
