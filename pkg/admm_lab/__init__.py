"""
admm-lab

ADMM for compressed sensing next to its asymptotic state-evolution prediction.

Features:
- Problem instances with Bernoulli-Gaussian or ±1 signals and Gaussian or
  Bernoulli measurement matrices
- Separable regularizers (l1, box indicator) with closed-form prox
- ADMM with a cached Cholesky / matrix-inversion-identity solver
- Per-iteration MSE and SER prediction from a particle ensemble and a
  nested ternary saddle-point search
- Parameter selection (lambda, rho) from predictions alone
- Parallel experiment runner with CSV output and tolerance reports
"""

__version__ = "0.1.0"
__author__ = "admm-lab contributors"

# Configuration and errors
from .config import Config
from .exceptions import (
    AdmmLabException,
    ConfigurationError,
    ValidationError,
    DimensionMismatchError,
    NonBinarySignalError,
    NonFiniteMatrixError,
    SaddleSearchError,
    OptimumAtBoundaryError,
    NonFiniteObjectiveError,
    IdentityCheckError,
    MissingSourceError,
    ExperimentFailedError,
)

# Problem model
from .instances import (
    EMPIRICAL_STREAM,
    PREDICTION_STREAM,
    PriorKind,
    MatrixEnsemble,
    SignalPrior,
    ProblemInstance,
    make_rng,
    measurement_count,
    sample_signal,
    sample_matrix,
    generate_instance,
    sign_decision,
    mse,
    ser,
    empirical_cdf,
)

# Regularizers
from .regularizers import (
    RegularizerKind,
    SeparableRegularizer,
    L1,
    BoxIndicator,
    prox_l1,
    prox_box,
    prox_vector,
    penalty_value,
)

# ADMM
from .admm import (
    FactorizationMethod,
    AdmmConfig,
    AdmmState,
    CachedSolver,
    Trajectory,
    TrajectoryRecord,
    prepare,
    admm_step,
    run,
    continue_run,
)

# Prediction
from .prediction import (
    PredictionConfig,
    ParticleEnsemble,
    SaddlePoint,
    PredictionRecord,
    PredictionTrajectory,
    SaddleObjective,
    init_ensemble,
    s_hat,
    j_value,
    ternary_search,
    nested_ternary_saddle,
    solve_saddle,
    evolve,
    predicted_ser,
    predicted_cdf,
    predict_trajectory,
)

# Parameter selection
from .tuning import Candidate, Selection, iterations_to_plateau, select_lambda, select_rho

# Results and experiments
from .results import (
    RESULT_COLUMNS,
    CDF_COLUMNS,
    Source,
    ResultRow,
    ResultTable,
    CdfRow,
    CdfTable,
    Tolerances,
    IterationGap,
    ComparisonReport,
)
from .experiments import (
    Scenario,
    Output,
    ExperimentSpec,
    ExperimentResult,
    ExperimentRunner,
    PRESETS,
    load_spec_file,
    dump_spec_file,
    apply_overrides,
    run_trial,
    run_experiment,
    sweep,
    compare_report,
)

__all__ = [
    # Configuration and errors
    "Config",
    "AdmmLabException",
    "ConfigurationError",
    "ValidationError",
    "DimensionMismatchError",
    "NonBinarySignalError",
    "NonFiniteMatrixError",
    "SaddleSearchError",
    "OptimumAtBoundaryError",
    "NonFiniteObjectiveError",
    "IdentityCheckError",
    "MissingSourceError",
    "ExperimentFailedError",

    # Problem model
    "EMPIRICAL_STREAM",
    "PREDICTION_STREAM",
    "PriorKind",
    "MatrixEnsemble",
    "SignalPrior",
    "ProblemInstance",
    "make_rng",
    "measurement_count",
    "sample_signal",
    "sample_matrix",
    "generate_instance",
    "sign_decision",
    "mse",
    "ser",
    "empirical_cdf",

    # Regularizers
    "RegularizerKind",
    "SeparableRegularizer",
    "L1",
    "BoxIndicator",
    "prox_l1",
    "prox_box",
    "prox_vector",
    "penalty_value",

    # ADMM
    "FactorizationMethod",
    "AdmmConfig",
    "AdmmState",
    "CachedSolver",
    "Trajectory",
    "TrajectoryRecord",
    "prepare",
    "admm_step",
    "run",
    "continue_run",

    # Prediction
    "PredictionConfig",
    "ParticleEnsemble",
    "SaddlePoint",
    "PredictionRecord",
    "PredictionTrajectory",
    "SaddleObjective",
    "init_ensemble",
    "s_hat",
    "j_value",
    "ternary_search",
    "nested_ternary_saddle",
    "solve_saddle",
    "evolve",
    "predicted_ser",
    "predicted_cdf",
    "predict_trajectory",

    # Parameter selection
    "Candidate",
    "Selection",
    "iterations_to_plateau",
    "select_lambda",
    "select_rho",

    # Results and experiments
    "RESULT_COLUMNS",
    "CDF_COLUMNS",
    "Source",
    "ResultRow",
    "ResultTable",
    "CdfRow",
    "CdfTable",
    "Tolerances",
    "IterationGap",
    "ComparisonReport",
    "Scenario",
    "Output",
    "ExperimentSpec",
    "ExperimentResult",
    "ExperimentRunner",
    "PRESETS",
    "load_spec_file",
    "dump_spec_file",
    "apply_overrides",
    "run_trial",
    "run_experiment",
    "sweep",
    "compare_report",
]
