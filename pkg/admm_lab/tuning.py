"""
Parameter selection from predicted trajectories.

lambda is picked by the smallest predicted MSE after a fixed number of
iterations; rho by the fewest predicted iterations to reach the plateau.
Neither needs a single empirical ADMM run.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from .exceptions import ValidationError
from .prediction import PredictionConfig, PredictionTrajectory, predict_trajectory
from .instances import SignalPrior
from .regularizers import SeparableRegularizer

logger = logging.getLogger(__name__)


def iterations_to_plateau(series: Sequence[float], rel_tol: float = 0.05) -> int:
    """
    First k (1-based) from which every later value stays within ``rel_tol``
    of the final value.
    """
    values = np.asarray(series, dtype=np.float64)
    if values.size == 0:
        raise ValidationError("Cannot find the plateau of an empty series")
    final = values[-1]
    band = rel_tol * max(abs(final), 1e-300)
    outside = np.nonzero(np.abs(values - final) > band)[0]
    return int(outside[-1]) + 2 if outside.size else 1


@dataclass
class Candidate:
    """Outcome of one predicted trajectory during a selection."""
    value: float
    final_mse: float
    plateau_iteration: int
    trajectory: PredictionTrajectory = field(repr=False)


@dataclass
class Selection:
    """Ranked candidates; ``best`` is the chosen parameter value."""
    parameter: str
    best: float
    candidates: List[Candidate] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            'parameter': self.parameter,
            'best': self.best,
            'candidates': [
                {
                    'value': c.value,
                    'final_mse': c.final_mse,
                    'plateau_iteration': c.plateau_iteration,
                }
                for c in self.candidates
            ],
        }


def _candidate(value: float, trajectory: PredictionTrajectory, plateau_tol: float) -> Candidate:
    mse = trajectory.mse
    return Candidate(
        value=value,
        final_mse=float(mse[-1]),
        plateau_iteration=iterations_to_plateau(mse, plateau_tol),
        trajectory=trajectory,
    )


def select_lambda(
    prior: SignalPrior,
    reg: SeparableRegularizer,
    delta: float,
    sigma_v2: float,
    rho: float,
    lambdas: Sequence[float],
    iters: int,
    config: PredictionConfig,
    plateau_tol: float = 0.05,
) -> Selection:
    """Pick the lambda with the smallest predicted MSE after ``iters`` iterations."""
    if not lambdas:
        raise ValidationError("No lambda candidates given")
    candidates = []
    for lam in lambdas:
        trajectory = predict_trajectory(prior, reg, lam, delta, sigma_v2, rho, iters, config)
        candidates.append(_candidate(lam, trajectory, plateau_tol))
        logger.info("lambda=%g final predicted mse=%.4e", lam, candidates[-1].final_mse)
    best = min(candidates, key=lambda c: c.final_mse)
    return Selection(parameter='lambda', best=best.value, candidates=candidates)


def select_rho(
    prior: SignalPrior,
    reg: SeparableRegularizer,
    lam: float,
    delta: float,
    sigma_v2: float,
    rhos: Sequence[float],
    iters: int,
    config: PredictionConfig,
    plateau_tol: float = 0.05,
) -> Selection:
    """Pick the rho that reaches its plateau first; ties go to the lower final MSE."""
    if not rhos:
        raise ValidationError("No rho candidates given")
    candidates = []
    for rho in rhos:
        trajectory = predict_trajectory(prior, reg, lam, delta, sigma_v2, rho, iters, config)
        candidates.append(_candidate(rho, trajectory, plateau_tol))
        logger.info("rho=%g plateau at k=%d", rho, candidates[-1].plateau_iteration)
    best = min(candidates, key=lambda c: (c.plateau_iteration, c.final_mse))
    return Selection(parameter='rho', best=best.value, candidates=candidates)
