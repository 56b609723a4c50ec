"""
ADMM for  minimize (1/2)||y - A s||^2 + lambda f(s)  with separable f.

Iteration (z = w = 0 at k = 0):

    s' = (A^T A + rho I)^{-1} (A^T y + rho (z - w))
    z' = prox_{(lambda/rho) f}(s' + w)
    w' = w + s' - z'

The linear system is factorized once per (A, rho). When M < N the M x M
system (A A^T + rho I) is factorized instead and applied through the
matrix inversion identity

    (A^T A + rho I)^{-1} b = (b - A^T (A A^T + rho I)^{-1} A b) / rho.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .exceptions import (
    DimensionMismatchError,
    IdentityCheckError,
    NonFiniteMatrixError,
    ValidationError,
)
from .instances import ProblemInstance, mse, ser
from .regularizers import SeparableRegularizer, penalty_value

logger = logging.getLogger(__name__)

IDENTITY_RTOL = 1e-8


class FactorizationMethod(str, Enum):
    """How CachedSolver applies (A^T A + rho I)^{-1}."""
    AUTO = "auto"          # woodbury when M < N, direct otherwise
    DIRECT = "direct"      # Cholesky of the N x N system
    WOODBURY = "woodbury"  # Cholesky of the M x M system


@dataclass(frozen=True)
class AdmmConfig:
    """
    ADMM parameters.

    Attributes:
        rho: Augmented-Lagrangian parameter, fixed across iterations.
        lam: Regularization weight lambda. Irrelevant for the box indicator.
        max_iter: Number of iterations; there is no early stopping.
        record_estimates: Keep a copy of s^(k) in every record.
        verify_identity: Check once per run that the rewritten s-update
            (A^T A x + A^T v in place of A^T y) gives the same s^(1). The
            check also runs whenever this module logs at DEBUG.
        method: Factorization strategy.
    """

    rho: float
    lam: float = 1.0
    max_iter: int = 50
    record_estimates: bool = False
    verify_identity: bool = False
    method: FactorizationMethod = FactorizationMethod.AUTO

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise ValidationError(f"rho must be positive, got {self.rho!r}")
        if not self.lam > 0:
            raise ValidationError(f"lambda must be positive, got {self.lam!r}")
        if self.max_iter < 0:
            raise ValidationError(f"max_iter must be non-negative, got {self.max_iter}")


@dataclass(frozen=True)
class AdmmState:
    """Iterates (s, z, w) after k iterations."""

    s: np.ndarray
    z: np.ndarray
    w: np.ndarray
    k: int = 0

    @classmethod
    def initial(cls, n: int) -> 'AdmmState':
        zeros = np.zeros(n)
        return cls(s=zeros.copy(), z=zeros.copy(), w=zeros.copy(), k=0)


@dataclass(frozen=True)
class CachedSolver:
    """
    Factorized (A^T A + rho I), ready to solve for any right-hand side.

    Attributes:
        A: The matrix the factorization was built from.
        rho: Shift.
        method: DIRECT or WOODBURY (AUTO is resolved in ``prepare``).
        factor: ``cho_factor`` output of the N x N or M x M system.
    """

    A: np.ndarray
    rho: float
    method: FactorizationMethod
    factor: tuple

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def m(self) -> int:
        return self.A.shape[0]

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Return u with (A^T A + rho I) u = b; b may have several columns."""
        b = np.asarray(b, dtype=np.float64)
        if b.shape[0] != self.n:
            raise DimensionMismatchError(
                f"Right-hand side has {b.shape[0]} rows, system has {self.n}",
                expected=(self.n,),
                actual=b.shape,
            )
        if self.method == FactorizationMethod.DIRECT:
            return cho_solve(self.factor, b, check_finite=False)
        inner = cho_solve(self.factor, self.A @ b, check_finite=False)
        return (b - self.A.T @ inner) / self.rho

    __call__ = solve


def prepare(
    A: np.ndarray,
    rho: float,
    method: FactorizationMethod = FactorizationMethod.AUTO,
) -> CachedSolver:
    """
    Factorize the s-update system for ``(A, rho)``.

    Raises:
        NonFiniteMatrixError: A contains NaN or inf.
        ValidationError: rho <= 0.
    """
    if not rho > 0:
        raise ValidationError(f"rho must be positive, got {rho!r}")
    A = np.asarray(A, dtype=np.float64)
    if not np.all(np.isfinite(A)):
        raise NonFiniteMatrixError()
    m, n = A.shape

    method = FactorizationMethod(method)
    if method == FactorizationMethod.AUTO:
        method = FactorizationMethod.WOODBURY if m < n else FactorizationMethod.DIRECT

    if method == FactorizationMethod.DIRECT:
        system = A.T @ A + rho * np.eye(n)
    else:
        system = A @ A.T + rho * np.eye(m)
    factor = cho_factor(system, lower=True, check_finite=False)
    logger.debug("Factorized %dx%d system (%s, rho=%g)", *system.shape, method.value, rho)
    return CachedSolver(A=A, rho=rho, method=method, factor=factor)


def admm_step(
    state: AdmmState,
    instance: ProblemInstance,
    config: AdmmConfig,
    reg: SeparableRegularizer,
    solver: CachedSolver,
) -> AdmmState:
    """One ADMM iteration; returns the state at k + 1."""
    if state.z.shape != (instance.n,) or state.w.shape != (instance.n,):
        raise DimensionMismatchError(
            f"State has length {state.z.shape[0]}, instance has N={instance.n}",
            expected=(instance.n,),
            actual=state.z.shape,
        )
    rho = config.rho
    s = solver.solve(instance.aty + rho * (state.z - state.w))
    z = np.asarray(reg.prox(config.lam / rho, s + state.w), dtype=np.float64)
    w = state.w + s - z
    return AdmmState(s=s, z=z, w=w, k=state.k + 1)


def objective(
    instance: ProblemInstance,
    reg: SeparableRegularizer,
    lam: float,
    s: np.ndarray,
) -> float:
    """(1/2)||y - A s||^2 + lambda f(s); +inf outside the domain of f."""
    penalty = penalty_value(reg, s)
    if math.isinf(penalty):
        return math.inf
    residual = instance.y - instance.A @ s
    return 0.5 * float(residual @ residual) + lam * penalty


# ============================================================================
# TRAJECTORIES
# ============================================================================

@dataclass
class TrajectoryRecord:
    """
    Metrics after iteration k.

    MSE and SER refer to the tentative estimate s^(k); the ``_z`` variants
    score z^(k). SER fields are None unless the signal is ±1.
    """
    k: int
    mse: float
    mse_z: float
    primal_residual: float
    objective: float
    ser: Optional[float] = None
    ser_z: Optional[float] = None
    estimate: Optional[np.ndarray] = field(default=None, repr=False)


@dataclass
class Trajectory:
    """Per-iteration records of one ADMM run."""
    records: List[TrajectoryRecord] = field(default_factory=list)
    final_state: Optional[AdmmState] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def mse(self) -> np.ndarray:
        return np.array([r.mse for r in self.records])

    @property
    def ser(self) -> np.ndarray:
        return np.array([np.nan if r.ser is None else r.ser for r in self.records])

    @property
    def primal_residual(self) -> np.ndarray:
        return np.array([r.primal_residual for r in self.records])

    @property
    def objective(self) -> np.ndarray:
        return np.array([r.objective for r in self.records])

    def estimate_at(self, k: int) -> np.ndarray:
        """The s^(k) snapshot; requires ``record_estimates``."""
        for record in self.records:
            if record.k == k and record.estimate is not None:
                return record.estimate
        raise KeyError(f"No estimate recorded for k={k}")


def _verify_rewritten_update(
    instance: ProblemInstance,
    config: AdmmConfig,
    solver: CachedSolver,
    state: AdmmState,
    s_next: np.ndarray,
) -> None:
    A = instance.A
    rhs = A.T @ (A @ instance.x) + A.T @ instance.v + config.rho * (state.z - state.w)
    rewritten = solver.solve(rhs)
    scale = max(float(np.linalg.norm(s_next)), 1e-300)
    gap = float(np.linalg.norm(rewritten - s_next)) / scale
    if gap > IDENTITY_RTOL:
        raise IdentityCheckError(gap)
    logger.debug("Rewritten s-update matches (relative gap %.2e)", gap)


def run(
    instance: ProblemInstance,
    config: AdmmConfig,
    reg: SeparableRegularizer,
    solver: Optional[CachedSolver] = None,
) -> Trajectory:
    """
    Run ``config.max_iter`` iterations from z = w = 0 and record metrics.

    Args:
        instance: Problem realization.
        config: ADMM parameters.
        reg: Regularizer.
        solver: Factorization to reuse; built with ``prepare`` when omitted.
    """
    if solver is None:
        solver = prepare(instance.A, config.rho, config.method)
    binary = instance.is_binary
    verify = config.verify_identity or logger.isEnabledFor(logging.DEBUG)
    n = instance.n
    state = AdmmState.initial(n)
    trajectory = Trajectory()

    for _ in range(config.max_iter):
        previous = state
        state = admm_step(state, instance, config, reg, solver)
        if verify and state.k == 1:
            _verify_rewritten_update(instance, config, solver, previous, state.s)

        record = TrajectoryRecord(
            k=state.k,
            mse=mse(state.s, instance.x),
            mse_z=mse(state.z, instance.x),
            primal_residual=float(np.linalg.norm(state.s - state.z)) / math.sqrt(n),
            objective=objective(instance, reg, config.lam, state.z),
        )
        if binary:
            record.ser = ser(state.s, instance.x)
            record.ser_z = ser(state.z, instance.x)
        if config.record_estimates:
            record.estimate = state.s.copy()
        trajectory.records.append(record)

    trajectory.final_state = state
    if trajectory.records:
        last = trajectory.records[-1]
        logger.debug(
            "ADMM finished k=%d mse=%.4e residual=%.2e", last.k, last.mse, last.primal_residual
        )
    return trajectory


def continue_run(
    instance: ProblemInstance,
    config: AdmmConfig,
    reg: SeparableRegularizer,
    state: AdmmState,
    iterations: int,
    solver: Optional[CachedSolver] = None,
) -> AdmmState:
    """Advance ``state`` by ``iterations`` steps without recording."""
    if solver is None:
        solver = prepare(instance.A, config.rho, config.method)
    for _ in range(iterations):
        state = admm_step(state, instance, config, reg, solver)
    return state
