"""
State-evolution prediction of ADMM's per-iteration behavior.

A particle ensemble stands in for the joint law of (X, S_k, Z_k, W_k). Every
iteration solves the scalar min-max problem

    min_{alpha>0} max_{beta>0}  alpha beta sqrt(D)/2 + beta sigma_v2 sqrt(D)/(2 alpha)
                                - beta^2/2 + E[J(alpha, beta)]

by nested ternary search and then pushes each particle through

    S' = S_hat(alpha*, beta*)
    Z' = prox_{(lambda/rho) f}(S' + W)
    W' = W + S' - Z'

The predicted MSE of s^(k+1) is (alpha_k*)^2 - sigma_v2.

Each particle keeps one Gaussian draw H for the whole trajectory, the way
ADMM reuses one matrix A in every iteration. ``fresh_h`` redraws H every
iteration instead; it drifts away from ADMM after the first iteration and
is kept for comparison. Either way H is fixed during the search of one
iteration, so the objective is a deterministic smooth function of
(alpha, beta).

Because S_hat minimizes J in closed form, the particle average of J only
depends on the moments E[T^2], E[H^2], E[H T] with T = Z - W - X;
``SaddleObjective`` evaluates the objective from those moments in O(1).
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from .exceptions import (
    NonFiniteObjectiveError,
    OptimumAtBoundaryError,
    ValidationError,
)
from .instances import (
    PREDICTION_STREAM,
    SignalPrior,
    empirical_cdf,
    make_rng,
    ser,
)
from .regularizers import SeparableRegularizer

logger = logging.getLogger(__name__)

ArrayLike = np.ndarray
Objective2D = Callable[[float, float], float]


# ============================================================================
# MODELS
# ============================================================================

@dataclass(frozen=True)
class PredictionConfig:
    """
    Settings of the particle prediction.

    Attributes:
        particles: Ensemble size P.
        alpha_range: Initial search interval for alpha.
        beta_range: Initial search interval for beta.
        search_tol: Final interval width of each ternary search.
        seed: Master seed; the ensemble uses its own stream of it.
        fresh_h: Redraw H every iteration. By default each particle keeps
            one H for the whole trajectory.
        max_widenings: Range widenings allowed after OptimumAtBoundaryError.
        snapshot_iters: Iterations k at which a copy of S_k is kept.
    """

    particles: int = 100_000
    alpha_range: Tuple[float, float] = (1e-4, 10.0)
    beta_range: Tuple[float, float] = (1e-4, 10.0)
    search_tol: float = 1e-6
    seed: int = 0
    fresh_h: bool = False
    max_widenings: int = 4
    snapshot_iters: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.particles < 1:
            raise ValidationError(f"particles must be positive, got {self.particles}")
        for name, (lo, hi) in (("alpha_range", self.alpha_range), ("beta_range", self.beta_range)):
            if not 0 < lo < hi:
                raise ValidationError(f"{name} must satisfy 0 < lo < hi, got ({lo}, {hi})")
        if not self.search_tol > 0:
            raise ValidationError(f"search_tol must be positive, got {self.search_tol}")
        if self.max_widenings < 0:
            raise ValidationError("max_widenings must be non-negative")


@dataclass(frozen=True)
class ParticleEnsemble:
    """
    Monte-Carlo sample of the scalar process.

    Attributes:
        X: Signal draws, fixed for the ensemble's lifetime.
        S: Last computed S_k (zero at k = 0).
        Z: Current Z_k.
        W: Current W_k.
        k: Iteration index.
        H: Per-particle Gaussian draws kept across iterations (None with fresh_h).
    """

    X: np.ndarray
    S: np.ndarray
    Z: np.ndarray
    W: np.ndarray
    k: int = 0
    H: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def P(self) -> int:
        return self.X.shape[0]


@dataclass(frozen=True)
class SaddlePoint:
    """Optimizer (alpha*, beta*) of the per-iteration min-max problem and its value."""

    alpha_star: float
    beta_star: float
    value: float

    def __post_init__(self) -> None:
        if not (self.alpha_star > 0 and self.beta_star > 0):
            raise ValidationError(
                f"Saddle point must be positive, got ({self.alpha_star}, {self.beta_star})"
            )


@dataclass
class PredictionRecord:
    """
    Prediction for s^(k).

    ``predicted_mse_corollary`` is clamped at zero; the raw value
    (alpha*)^2 - sigma_v2 is kept in ``predicted_mse_corollary_raw``.
    """
    k: int
    alpha_star: float
    beta_star: float
    saddle_value: float
    predicted_mse_corollary: float
    predicted_mse_corollary_raw: float
    predicted_mse_ensemble: float
    predicted_ser: Optional[float] = None
    samples: Optional[np.ndarray] = field(default=None, repr=False)


@dataclass
class PredictionTrajectory:
    """Per-iteration prediction records plus the final ensemble."""
    records: List[PredictionRecord] = field(default_factory=list)
    particles: int = 0
    final_ensemble: Optional[ParticleEnsemble] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def mse(self) -> np.ndarray:
        """Corollary MSE per iteration."""
        return np.array([r.predicted_mse_corollary for r in self.records])

    @property
    def mse_ensemble(self) -> np.ndarray:
        return np.array([r.predicted_mse_ensemble for r in self.records])

    @property
    def ser(self) -> np.ndarray:
        return np.array([np.nan if r.predicted_ser is None else r.predicted_ser for r in self.records])

    @property
    def alpha_star(self) -> np.ndarray:
        return np.array([r.alpha_star for r in self.records])

    def samples_at(self, k: int) -> np.ndarray:
        for record in self.records:
            if record.k == k and record.samples is not None:
                return record.samples
        raise KeyError(f"No particle snapshot recorded for k={k}")


# ============================================================================
# SCALAR PROCESS
# ============================================================================

def init_ensemble(prior: SignalPrior, P: int, rng: np.random.Generator) -> ParticleEnsemble:
    """X drawn from ``prior``; S = Z = W = 0; k = 0."""
    if P < 1:
        raise ValidationError(f"Particle count must be positive, got {P}")
    X = prior.sample(P, rng)
    zeros = np.zeros(P)
    return ParticleEnsemble(X=X, S=zeros.copy(), Z=zeros.copy(), W=zeros.copy(), k=0)


def _weight(alpha: float, beta: float, delta: float) -> float:
    return beta * math.sqrt(delta) / alpha


def s_hat(
    alpha: float,
    beta: float,
    x: ArrayLike,
    h: ArrayLike,
    z: ArrayLike,
    w: ArrayLike,
    delta: float,
    rho: float,
) -> ArrayLike:
    """
    Weighted average of X + (alpha/sqrt(D)) H and Z - W with weights
    beta sqrt(D)/alpha and rho.
    """
    c = _weight(alpha, beta, delta)
    noisy = x + (alpha / math.sqrt(delta)) * h
    return (c * noisy + rho * (z - w)) / (c + rho)


def j_value(
    alpha: float,
    beta: float,
    x: ArrayLike,
    h: ArrayLike,
    z: ArrayLike,
    w: ArrayLike,
    delta: float,
    rho: float,
) -> ArrayLike:
    """J(alpha, beta) per particle, evaluated at S = s_hat(...)."""
    c = _weight(alpha, beta, delta)
    s = s_hat(alpha, beta, x, h, z, w, delta, rho)
    e = s - x
    return 0.5 * c * e ** 2 - beta * h * e + 0.5 * rho * (s - z + w) ** 2


def _analytic_terms(alpha: float, beta: float, delta: float, sigma_v2: float) -> float:
    root = math.sqrt(delta)
    return 0.5 * alpha * beta * root + 0.5 * beta * sigma_v2 * root / alpha - 0.5 * beta ** 2


def objective(
    alpha: float,
    beta: float,
    ensemble: ParticleEnsemble,
    h_draws: np.ndarray,
    delta: float,
    sigma_v2: float,
    rho: float,
) -> float:
    """Saddle objective with E[J] replaced by the particle average."""
    j = j_value(alpha, beta, ensemble.X, h_draws, ensemble.Z, ensemble.W, delta, rho)
    return _analytic_terms(alpha, beta, delta, sigma_v2) + float(np.mean(j))


class SaddleObjective:
    """
    The saddle objective for a fixed (ensemble, h_draws), evaluated from
    particle moments.

    With T = Z - W - X the minimized J equals
    rho T^2/2 - (beta H + rho T)^2 / (2 (c + rho)),  c = beta sqrt(D)/alpha,
    so its average needs only E[T^2], E[H^2] and E[H T].
    """

    def __init__(
        self,
        ensemble: ParticleEnsemble,
        h_draws: np.ndarray,
        delta: float,
        sigma_v2: float,
        rho: float,
    ):
        t = ensemble.Z - ensemble.W - ensemble.X
        self.m_tt = float(np.mean(t * t))
        self.m_hh = float(np.mean(h_draws * h_draws))
        self.m_ht = float(np.mean(h_draws * t))
        self.delta = delta
        self.sigma_v2 = sigma_v2
        self.rho = rho

    def __call__(self, alpha: float, beta: float) -> float:
        rho = self.rho
        c = _weight(alpha, beta, self.delta)
        cross = beta ** 2 * self.m_hh + 2.0 * beta * rho * self.m_ht + rho ** 2 * self.m_tt
        mean_j = 0.5 * rho * self.m_tt - cross / (2.0 * (c + rho))
        return _analytic_terms(alpha, beta, self.delta, self.sigma_v2) + mean_j


# ============================================================================
# SADDLE SEARCH
# ============================================================================

def ternary_search(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    maximize: bool = False,
) -> Tuple[float, float]:
    """
    Ternary search of a unimodal function on [lo, hi] until the bracket is
    narrower than ``tol``. Returns (argument, value) at the bracket midpoint.
    """
    sign = -1.0 if maximize else 1.0
    while hi - lo > tol:
        third = (hi - lo) / 3.0
        left, right = lo + third, hi - third
        if sign * fn(left) < sign * fn(right):
            hi = right
        else:
            lo = left
    best = 0.5 * (lo + hi)
    return best, fn(best)


def _checked(fn: Objective2D) -> Objective2D:
    def wrapped(alpha: float, beta: float) -> float:
        value = fn(alpha, beta)
        if not math.isfinite(value):
            raise NonFiniteObjectiveError(alpha, beta)
        return value
    return wrapped


def _boundary_check(name: str, value: float, search_range: Tuple[float, float], tol: float) -> None:
    lo, hi = search_range
    if value - lo <= 2.0 * tol:
        raise OptimumAtBoundaryError(name, "lower", value, search_range)
    if hi - value <= 2.0 * tol:
        raise OptimumAtBoundaryError(name, "upper", value, search_range)


def nested_ternary_saddle(
    fn: Objective2D,
    alpha_range: Tuple[float, float],
    beta_range: Tuple[float, float],
    tol: float,
) -> SaddlePoint:
    """
    min over alpha of max over beta of ``fn``; the inner search runs to
    tolerance for every outer evaluation.

    Raises:
        OptimumAtBoundaryError: alpha* or beta* within 2 tol of a range end.
        NonFiniteObjectiveError: ``fn`` returned NaN or inf.
    """
    fn = _checked(fn)

    def inner(alpha: float) -> Tuple[float, float]:
        return ternary_search(lambda b: fn(alpha, b), *beta_range, tol, maximize=True)

    alpha_star, _ = ternary_search(lambda a: inner(a)[1], *alpha_range, tol)
    beta_star, value = inner(alpha_star)
    _boundary_check("alpha", alpha_star, alpha_range, tol)
    _boundary_check("beta", beta_star, beta_range, tol)
    return SaddlePoint(alpha_star=alpha_star, beta_star=beta_star, value=value)


class _SearchBox:
    """Search ranges that widen after a boundary hit."""

    def __init__(self, alpha_range: Tuple[float, float], beta_range: Tuple[float, float]):
        self.ranges = {"alpha": tuple(alpha_range), "beta": tuple(beta_range)}

    def widen(self, error: BaseException) -> None:
        if not isinstance(error, OptimumAtBoundaryError):
            return
        lo, hi = self.ranges[error.parameter]
        if error.side == "upper":
            hi *= 2.0
        else:
            lo *= 0.5
        self.ranges[error.parameter] = (lo, hi)
        logger.info("Widened %s search range to (%g, %g)", error.parameter, lo, hi)


def solve_saddle(
    ensemble: ParticleEnsemble,
    h_draws: np.ndarray,
    delta: float,
    sigma_v2: float,
    rho: float,
    config: PredictionConfig,
    objective_fn: Optional[Objective2D] = None,
) -> SaddlePoint:
    """
    Solve the per-iteration min-max problem by nested ternary search,
    widening the offending range up to ``config.max_widenings`` times.

    Args:
        objective_fn: Replaces the ensemble objective, e.g. with a test
            surface of known saddle.
    """
    fn = objective_fn or SaddleObjective(ensemble, h_draws, delta, sigma_v2, rho)
    box = _SearchBox(config.alpha_range, config.beta_range)

    for attempt in Retrying(
        stop=stop_after_attempt(config.max_widenings + 1),
        retry=retry_if_exception_type(OptimumAtBoundaryError),
        after=lambda state: box.widen(state.outcome.exception()),
        reraise=True,
    ):
        with attempt:
            saddle = nested_ternary_saddle(
                fn, box.ranges["alpha"], box.ranges["beta"], config.search_tol
            )
    return saddle


def evolve(
    ensemble: ParticleEnsemble,
    saddle: SaddlePoint,
    h_draws: np.ndarray,
    reg: SeparableRegularizer,
    lam: float,
    rho: float,
    delta: float,
) -> ParticleEnsemble:
    """Advance every particle one iteration with the solved saddle point."""
    S = s_hat(
        saddle.alpha_star, saddle.beta_star, ensemble.X, h_draws, ensemble.Z, ensemble.W, delta, rho
    )
    Z = np.asarray(reg.prox(lam / rho, S + ensemble.W), dtype=np.float64)
    W = ensemble.W + S - Z
    return replace(ensemble, S=S, Z=Z, W=W, k=ensemble.k + 1)


def predicted_ser(ensemble: ParticleEnsemble) -> float:
    """Fraction of particles with sign(S) != X; requires a ±1 prior."""
    return ser(ensemble.S, ensemble.X)


def predicted_cdf(ensemble: ParticleEnsemble, grid: Sequence[float]) -> np.ndarray:
    """Empirical CDF of the particle S values on ``grid``."""
    return empirical_cdf(ensemble.S, grid)


def predict_trajectory(
    prior: SignalPrior,
    reg: SeparableRegularizer,
    lam: float,
    delta: float,
    sigma_v2: float,
    rho: float,
    iters: int,
    config: PredictionConfig,
    on_record: Optional[Callable[[PredictionRecord], None]] = None,
) -> PredictionTrajectory:
    """
    Run ``iters`` iterations of saddle search + evolve.

    Args:
        on_record: Called with every record as soon as it is computed, so
            callers keep partial results if a later iteration fails.
    """
    rng = make_rng(config.seed, PREDICTION_STREAM)
    ensemble = init_ensemble(prior, config.particles, rng)
    if not config.fresh_h:
        ensemble = replace(ensemble, H=rng.standard_normal(ensemble.P))
    trajectory = PredictionTrajectory(particles=ensemble.P)

    for _ in range(iters):
        h_draws = rng.standard_normal(ensemble.P) if config.fresh_h else ensemble.H
        saddle = solve_saddle(ensemble, h_draws, delta, sigma_v2, rho, config)
        ensemble = evolve(ensemble, saddle, h_draws, reg, lam, rho, delta)

        raw = saddle.alpha_star ** 2 - sigma_v2
        if raw < 0:
            logger.warning("Clamped Corollary MSE %.3e to zero at k=%d", raw, ensemble.k)
        record = PredictionRecord(
            k=ensemble.k,
            alpha_star=saddle.alpha_star,
            beta_star=saddle.beta_star,
            saddle_value=saddle.value,
            predicted_mse_corollary=max(raw, 0.0),
            predicted_mse_corollary_raw=raw,
            predicted_mse_ensemble=float(np.mean((ensemble.S - ensemble.X) ** 2)),
        )
        if prior.is_binary:
            record.predicted_ser = predicted_ser(ensemble)
        if ensemble.k in config.snapshot_iters:
            record.samples = ensemble.S.copy()
        trajectory.records.append(record)
        if on_record is not None:
            on_record(record)
        logger.debug(
            "k=%d alpha*=%.6f beta*=%.6f mse=%.4e",
            ensemble.k, saddle.alpha_star, saddle.beta_star, record.predicted_mse_corollary,
        )

    trajectory.final_ensemble = ensemble
    return trajectory
