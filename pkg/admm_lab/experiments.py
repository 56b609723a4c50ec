"""
Experiment cells: empirical ADMM trials next to a matched prediction.

An ``ExperimentSpec`` describes one cell (scenario, dimensions, noise, ADMM
parameters, trial and particle counts). ``ExperimentRunner`` runs the trials
on a bounded thread pool while the prediction runs on its own executor, then
aggregates per-iteration means in trial order and writes

    <out>/results.csv   per-iteration empirical / prediction rows
    <out>/cdf.csv       empirical vs predicted CDF (when requested)
    <out>/summary.json  spec echo, comparison verdict, KS distances

Spec files are flat ``key=value`` text (dotenv syntax), for example::

    scenario=sparse_l1
    n=500
    delta=0.9
    p0=0.8
    sigma_v2=0.001
    rho=0.1
    lambda=0.05
    outputs=mse
"""

import asyncio
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError
from pydantic import field_validator, model_validator
from scipy import stats
from tqdm import tqdm

from .admm import AdmmConfig, continue_run, prepare, run
from .config import Config
from .exceptions import ConfigurationError, ExperimentFailedError, MissingSourceError
from .instances import (
    EMPIRICAL_STREAM,
    MatrixEnsemble,
    SignalPrior,
    empirical_cdf,
    generate_instance,
    make_rng,
    mse,
)
from .prediction import PredictionConfig, PredictionRecord, predict_trajectory
from .regularizers import BoxIndicator, L1, SeparableRegularizer
from .results import (
    CdfRow,
    CdfTable,
    ComparisonReport,
    IterationGap,
    ResultRow,
    ResultTable,
    Source,
    Tolerances,
    db_gap,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Lambda is meaningless for the box indicator; ADMM still needs a positive value.
BOX_LAMBDA = 1.0


# ============================================================================
# SPEC
# ============================================================================

class Scenario(str, Enum):
    """Reconstruction problems."""
    SPARSE_L1 = "sparse_l1"    # Bernoulli-Gaussian signal, l1 regularizer
    BINARY_BOX = "binary_box"  # ±1 signal, box relaxation


class Output(str, Enum):
    MSE = "mse"
    SER = "ser"
    CDF = "cdf"


SWEEPABLE = frozenset({
    'rho', 'delta', 'm', 'n', 'sigma_v2', 'p0', 'lambda', 'matrix_ensemble', 'iters', 'seed',
})


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return tuple(item.strip() for item in value.split(',') if item.strip())
    return value


class ExperimentSpec(BaseModel):
    """
    One experiment cell.

    ``delta`` and ``m`` are alternatives: give either one and the other is
    derived (M = round(delta N)). ``lambda`` is required for sparse_l1 and
    forbidden for binary_box.

    Example:
        >>> spec = ExperimentSpec.sparse_mse()
        >>> spec = spec.with_override('rho', 0.2)
    """

    model_config = ConfigDict(populate_by_name=True, extra='forbid', frozen=True)

    scenario: Scenario = Scenario.SPARSE_L1
    n: int = Field(500, ge=1)
    delta: Optional[float] = Field(None, gt=0)
    m: Optional[int] = Field(None, ge=1)
    p0: Optional[float] = Field(None, gt=0, lt=1)
    sigma_v2: float = Field(0.001, ge=0)
    rho: float = Field(0.1, gt=0)
    lambda_: Optional[float] = Field(None, gt=0, alias='lambda')
    iters: int = Field(50, ge=0)
    trials: int = Field(100, ge=1)
    particles: int = Field(100_000, ge=1)
    matrix_ensemble: MatrixEnsemble = MatrixEnsemble.GAUSSIAN_IID
    seed: int = Field(0, ge=0)
    outputs: Tuple[Output, ...] = (Output.MSE,)

    cdf_iters: Tuple[int, ...] = ()
    cdf_grid_min: float = -2.0
    cdf_grid_max: float = 2.0
    cdf_grid_points: int = Field(401, ge=2)

    reference_iters: int = Field(0, ge=0)

    search_tol: float = Field(1e-6, gt=0)
    alpha_min: float = Field(1e-4, gt=0)
    alpha_max: float = Field(10.0, gt=0)
    beta_min: float = Field(1e-4, gt=0)
    beta_max: float = Field(10.0, gt=0)
    fresh_h: bool = False

    mse_tol_db: float = Field(1.0, gt=0)
    ser_tol_abs: float = Field(0.01, gt=0)
    ks_tol: float = Field(0.05, gt=0)
    compare_from_k: int = Field(1, ge=1)

    @field_validator('outputs', 'cdf_iters', mode='before')
    @classmethod
    def split_lists(cls, value: Any) -> Any:
        return _split_list(value)

    @model_validator(mode='before')
    @classmethod
    def resolve_dimensions(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        for key in [k for k, v in data.items() if v in ('', None)]:
            del data[key]
        n = int(data.get('n', 500))
        delta, m = data.get('delta'), data.get('m')
        if delta is None and m is None:
            raise ValueError("one of 'delta' or 'm' is required")
        if m is not None:
            implied = int(m) / n
            if delta is not None and abs(float(delta) - implied) > 0.5 / n:
                raise ValueError(f"delta={delta} contradicts m={m} for n={n}")
            data['delta'] = implied
        else:
            data['m'] = int(np.floor(float(delta) * n + 0.5))
        return data

    @model_validator(mode='after')
    def check_scenario(self) -> 'ExperimentSpec':
        if self.scenario == Scenario.BINARY_BOX:
            if self.lambda_ is not None:
                raise ValueError("binary_box takes no lambda")
            if self.p0 is not None:
                raise ValueError("binary_box takes no p0")
        else:
            if self.lambda_ is None:
                raise ValueError("sparse_l1 requires lambda")
            if self.p0 is None:
                raise ValueError("sparse_l1 requires p0")
            if Output.SER in self.outputs:
                raise ValueError("ser output needs the binary_box scenario")
        if Output.CDF in self.outputs and not self.cdf_iters:
            raise ValueError("cdf output needs cdf_iters")
        if any(k < 1 or k > self.iters for k in self.cdf_iters):
            raise ValueError(f"cdf_iters must lie in [1, iters={self.iters}]")
        if not self.cdf_grid_min < self.cdf_grid_max:
            raise ValueError("cdf_grid_min must be below cdf_grid_max")
        if not (self.alpha_min < self.alpha_max and self.beta_min < self.beta_max):
            raise ValueError("search ranges must be well ordered")
        return self

    # ── derived objects ─────────────────────────────────────

    @property
    def lam(self) -> float:
        return BOX_LAMBDA if self.lambda_ is None else self.lambda_

    def prior(self) -> SignalPrior:
        if self.scenario == Scenario.BINARY_BOX:
            return SignalPrior.binary()
        return SignalPrior.bernoulli_gaussian(self.p0)

    def regularizer(self) -> SeparableRegularizer:
        return BoxIndicator() if self.scenario == Scenario.BINARY_BOX else L1()

    def admm_config(self) -> AdmmConfig:
        return AdmmConfig(
            rho=self.rho,
            lam=self.lam,
            max_iter=self.iters,
            record_estimates=Output.CDF in self.outputs,
        )

    def prediction_config(self) -> PredictionConfig:
        return PredictionConfig(
            particles=self.particles,
            alpha_range=(self.alpha_min, self.alpha_max),
            beta_range=(self.beta_min, self.beta_max),
            search_tol=self.search_tol,
            seed=self.seed,
            fresh_h=self.fresh_h,
            snapshot_iters=tuple(self.cdf_iters),
        )

    def tolerances(self) -> Tolerances:
        return Tolerances(
            mse_db=self.mse_tol_db if Output.MSE in self.outputs else None,
            ser_abs=self.ser_tol_abs,
            ks=self.ks_tol,
            from_k=self.compare_from_k,
        )

    def cdf_grid(self) -> np.ndarray:
        return np.linspace(self.cdf_grid_min, self.cdf_grid_max, self.cdf_grid_points)

    # ── (de)serialization ───────────────────────────────────

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode='json', by_alias=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentSpec':
        try:
            return cls.model_validate(data)
        except PydanticValidationError as exc:
            raise ConfigurationError(f"Invalid experiment spec: {exc}") from exc

    def with_override(self, key: str, value: Any) -> 'ExperimentSpec':
        """Copy with one field replaced and the result revalidated."""
        key = key.strip().lower()
        known = {f.alias or name for name, f in type(self).model_fields.items()}
        if key not in known:
            raise ConfigurationError(f"Unknown spec key '{key}'", key=key)
        data = self.to_dict()
        data[key] = value
        # delta and m describe the same quantity; the overridden one wins
        if key == 'delta':
            data.pop('m', None)
        elif key in ('m', 'n'):
            data.pop('delta' if key == 'm' else 'm', None)
        return type(self).from_dict(data)

    def dumps(self) -> str:
        """Flat key=value text accepted by ``load_spec_file``."""
        lines = ["# admm-lab experiment spec"]
        for key, value in self.to_dict().items():
            if value is None:
                continue
            if isinstance(value, (list, tuple)):
                value = ','.join(str(v) for v in value)
            elif isinstance(value, bool):
                value = 'true' if value else 'false'
            lines.append(f"{key}={value}")
        return '\n'.join(lines) + '\n'

    # ── presets ─────────────────────────────────────────────

    @classmethod
    def sparse_mse(cls) -> 'ExperimentSpec':
        """Sparse recovery, MSE versus iteration (delta 0.9, p0 0.8)."""
        return cls(
            scenario=Scenario.SPARSE_L1, n=1000, delta=0.9, p0=0.8, sigma_v2=0.001,
            rho=0.1, lambda_=0.05, iters=50, trials=100, particles=100_000,
        )

    @classmethod
    def sparse_ensembles(cls) -> 'ExperimentSpec':
        """Matrix universality cell; sweep matrix_ensemble over both ensembles."""
        return cls(
            scenario=Scenario.SPARSE_L1, n=500, m=250, p0=0.9, sigma_v2=0.001,
            rho=0.1, lambda_=0.05, iters=50, trials=500, particles=100_000,
        )

    @classmethod
    def sparse_rho(cls) -> 'ExperimentSpec':
        """rho study cell; sweep rho over 0.05, 0.2, 0.5."""
        return cls(
            scenario=Scenario.SPARSE_L1, n=500, delta=0.8, p0=0.9, sigma_v2=0.005,
            rho=0.2, lambda_=0.1, iters=50, trials=100, particles=100_000,
        )

    @classmethod
    def binary_ser(cls) -> 'ExperimentSpec':
        """Binary recovery SER cell; sweep delta over 0.7, 0.8, 0.9."""
        return cls(
            scenario=Scenario.BINARY_BOX, n=500, delta=0.8, sigma_v2=0.04, rho=0.1,
            iters=30, trials=300, particles=300_000, outputs=(Output.SER,),
            compare_from_k=2,
        )

    @classmethod
    def binary_cdf(cls) -> 'ExperimentSpec':
        """Estimate distribution cell at k = 1, 4, 7."""
        return cls(
            scenario=Scenario.BINARY_BOX, n=500, m=400, sigma_v2=0.001, rho=0.1,
            iters=7, trials=100, particles=100_000,
            outputs=(Output.MSE, Output.SER, Output.CDF), cdf_iters=(1, 4, 7),
        )


PRESETS: Dict[str, Callable[[], ExperimentSpec]] = {
    'sparse_mse': ExperimentSpec.sparse_mse,
    'sparse_ensembles': ExperimentSpec.sparse_ensembles,
    'sparse_rho': ExperimentSpec.sparse_rho,
    'binary_ser': ExperimentSpec.binary_ser,
    'binary_cdf': ExperimentSpec.binary_cdf,
}


def load_spec_file(path: PathLike) -> ExperimentSpec:
    """Parse a key=value spec file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Spec file not found: {path}")
    values = {key.lower(): value for key, value in dotenv_values(path).items()}
    return ExperimentSpec.from_dict(values)


def dump_spec_file(spec: ExperimentSpec, path: Optional[PathLike] = None) -> str:
    """Render ``spec`` as key=value text, writing it to ``path`` when given."""
    text = spec.dumps()
    if path is not None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding='utf-8')
    return text


def apply_overrides(spec: ExperimentSpec, overrides: Sequence[str]) -> ExperimentSpec:
    """Apply ``key=value`` strings in order."""
    for item in overrides:
        if '=' not in item:
            raise ConfigurationError(f"Override must look like key=value, got '{item}'")
        key, value = item.split('=', 1)
        spec = spec.with_override(key, value.strip())
    return spec


# ============================================================================
# TRIALS
# ============================================================================

@dataclass
class TrialResult:
    """Per-iteration metrics of one empirical trial."""
    trial: int
    mse: np.ndarray
    ser: Optional[np.ndarray] = None
    snapshots: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)
    optimizer_mse: Optional[float] = None


def run_trial(spec: ExperimentSpec, trial: int) -> TrialResult:
    """Draw instance ``trial`` of ``spec`` and run ADMM on it."""
    rng = make_rng(spec.seed, EMPIRICAL_STREAM, trial)
    instance = generate_instance(
        spec.prior(), spec.matrix_ensemble, spec.n, spec.delta, spec.sigma_v2, rng
    )
    config = spec.admm_config()
    reg = spec.regularizer()
    solver = prepare(instance.A, config.rho, config.method)
    trajectory = run(instance, config, reg, solver)

    result = TrialResult(trial=trial, mse=trajectory.mse)
    if instance.is_binary:
        result.ser = trajectory.ser
    for k in spec.cdf_iters:
        result.snapshots[k] = trajectory.estimate_at(k)
    if spec.reference_iters > spec.iters:
        state = continue_run(
            instance, config, reg, trajectory.final_state,
            spec.reference_iters - spec.iters, solver,
        )
        result.optimizer_mse = mse(state.s, instance.x)
    return result


def _mean_and_stderr(samples: np.ndarray) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    mean = samples.mean(axis=0)
    if samples.shape[0] < 2:
        return mean, None
    return mean, samples.std(axis=0, ddof=1) / np.sqrt(samples.shape[0])


def empirical_rows(spec: ExperimentSpec, trials: List[TrialResult]) -> List[ResultRow]:
    """Average trial metrics per iteration, in trial order."""
    if not trials or spec.iters == 0:
        return []
    trials = sorted(trials, key=lambda t: t.trial)
    mse_mean, mse_err = _mean_and_stderr(np.stack([t.mse for t in trials]))
    ser_mean = ser_err = None
    if Output.SER in spec.outputs and trials[0].ser is not None:
        ser_mean, ser_err = _mean_and_stderr(np.stack([t.ser for t in trials]))

    rows = []
    for i in range(spec.iters):
        rows.append(ResultRow(
            source=Source.EMPIRICAL,
            k=i + 1,
            mse_mean=float(mse_mean[i]),
            mse_stderr=None if mse_err is None else float(mse_err[i]),
            ser_mean=None if ser_mean is None else float(ser_mean[i]),
            ser_stderr=None if ser_err is None else float(ser_err[i]),
            trials=len(trials),
        ))
    references = [t.optimizer_mse for t in trials if t.optimizer_mse is not None]
    if references:
        ref_mean, ref_err = _mean_and_stderr(np.array(references)[:, None])
        rows.append(ResultRow(
            source=Source.OPTIMIZER,
            k=spec.reference_iters,
            mse_mean=float(ref_mean[0]),
            mse_stderr=None if ref_err is None else float(ref_err[0]),
            trials=len(references),
        ))
    return rows


def prediction_rows(spec: ExperimentSpec, records: List[PredictionRecord]) -> List[ResultRow]:
    with_ser = Output.SER in spec.outputs
    return [
        ResultRow(
            source=Source.PREDICTION,
            k=record.k,
            mse_mean=record.predicted_mse_corollary,
            ser_mean=record.predicted_ser if with_ser else None,
            alpha_star=record.alpha_star,
            beta_star=record.beta_star,
            particles=spec.particles,
        )
        for record in records
    ]


def cdf_rows(
    spec: ExperimentSpec,
    trials: List[TrialResult],
    records: List[PredictionRecord],
) -> Tuple[CdfTable, Dict[int, float]]:
    """CDF table on the spec grid plus exact two-sample KS statistics."""
    grid = spec.cdf_grid()
    by_k = {r.k: r for r in records}
    table = CdfTable()
    ks_exact: Dict[int, float] = {}
    trials = sorted(trials, key=lambda t: t.trial)
    for k in spec.cdf_iters:
        pooled = np.concatenate([t.snapshots[k] for t in trials])
        particles = by_k[k].samples
        emp = empirical_cdf(pooled, grid)
        pred = empirical_cdf(particles, grid)
        table.rows.extend(
            CdfRow(k=k, grid_point=float(g), cdf_empirical=float(e), cdf_predicted=float(p))
            for g, e, p in zip(grid, emp, pred)
        )
        ks_exact[k] = float(stats.ks_2samp(pooled, particles).statistic)
    return table, ks_exact


# ============================================================================
# COMPARISON
# ============================================================================

def compare_report(
    table: ResultTable,
    tolerances: Optional[Tolerances] = None,
    cdf: Optional[CdfTable] = None,
) -> ComparisonReport:
    """
    Per-iteration agreement between empirical and predicted rows.

    Raises:
        MissingSourceError: the table lacks empirical or prediction rows.
    """
    tolerances = tolerances or Tolerances()
    for source in (Source.EMPIRICAL, Source.PREDICTION):
        if not table.has_source(source):
            raise MissingSourceError(source.value)

    predicted = {row.k: row for row in table.by_source(Source.PREDICTION)}
    report = ComparisonReport(tolerances=tolerances)
    for emp in table.by_source(Source.EMPIRICAL):
        pred = predicted.get(emp.k)
        if pred is None or emp.k < tolerances.from_k:
            continue
        gap = IterationGap(k=emp.k)
        if emp.mse_mean is not None and pred.mse_mean is not None:
            gap.mse_gap_db = db_gap(emp.mse_mean, pred.mse_mean)
            if pred.mse_mean > 0:
                gap.mse_gap_rel = abs(emp.mse_mean - pred.mse_mean) / pred.mse_mean
            if tolerances.mse_db is not None:
                gap.passed = abs(gap.mse_gap_db) <= tolerances.mse_db
        if emp.ser_mean is not None and pred.ser_mean is not None:
            gap.ser_gap = abs(emp.ser_mean - pred.ser_mean)
            gap.passed = gap.passed and gap.ser_gap <= tolerances.ser_abs
        report.gaps.append(gap)

    if cdf is not None:
        for k in cdf.iterations:
            report.ks_distances[k] = cdf.ks_distance(k)
    return report


# ============================================================================
# RUNNER
# ============================================================================

@dataclass
class ExperimentResult:
    """Everything one experiment produced."""
    spec: ExperimentSpec
    table: ResultTable
    cdf: Optional[CdfTable] = None
    report: Optional[ComparisonReport] = None
    ks_exact: Dict[int, float] = field(default_factory=dict)
    output_dir: Optional[Path] = None

    def summary(self) -> Dict[str, Any]:
        return {
            'spec': self.spec.to_dict(),
            'report': self.report.to_dict() if self.report else None,
            'ks_exact': {str(k): v for k, v in sorted(self.ks_exact.items())},
            'failed': self.table.failed,
        }

    def write(self, out_dir: PathLike) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        self.table.write(out / 'results.csv')
        if self.cdf is not None:
            self.cdf.write(out / 'cdf.csv')
        (out / 'summary.json').write_text(
            json.dumps(self.summary(), indent=2, sort_keys=True) + '\n', encoding='utf-8'
        )
        self.output_dir = out
        return out


class ExperimentRunner:
    """
    Runs experiment cells with bounded trial parallelism.

    Example:
        >>> runner = ExperimentRunner(Config(workers=4))
        >>> result = await runner.run(ExperimentSpec.sparse_mse(), out_dir="results/sparse_mse")
        >>> result.report.passed
    """

    def __init__(self, config: Optional[Config] = None, progress: bool = False):
        self.config = config or Config()
        self.config.validate()
        self.progress = progress

    async def run(self, spec: ExperimentSpec, out_dir: Optional[PathLike] = None) -> ExperimentResult:
        """
        Run one cell and, when ``out_dir`` is given, write its files.

        Raises:
            ExperimentFailedError: a trial or the prediction failed; the
                partial table (ending with a ``failed`` row) was written.
        """
        logger.info(
            "Running %s n=%d m=%d trials=%d particles=%d",
            spec.scenario.value, spec.n, spec.m, spec.trials, spec.particles,
        )
        loop = asyncio.get_running_loop()
        records: List[PredictionRecord] = []

        with ThreadPoolExecutor(max_workers=self.config.workers) as pool, \
                ThreadPoolExecutor(max_workers=1) as predictor, \
                tqdm(total=spec.trials, desc='trials', disable=not self.progress) as bar:
            prediction = loop.run_in_executor(
                predictor,
                lambda: predict_trajectory(
                    spec.prior(), spec.regularizer(), spec.lam, spec.delta, spec.sigma_v2,
                    spec.rho, spec.iters, spec.prediction_config(), on_record=records.append,
                ),
            )
            futures = []
            for trial in range(spec.trials):
                future = loop.run_in_executor(pool, run_trial, spec, trial)
                future.add_done_callback(lambda _: bar.update())
                futures.append(future)
            outcomes = await asyncio.gather(*futures, prediction, return_exceptions=True)

        trial_outcomes, prediction_outcome = outcomes[:-1], outcomes[-1]
        trials = [t for t in trial_outcomes if isinstance(t, TrialResult)]
        errors = [e for e in outcomes if isinstance(e, BaseException)]

        table = ResultTable(rows=empirical_rows(spec, trials) + prediction_rows(spec, records))
        if errors:
            return self._fail(spec, table, records, errors[0], out_dir)

        result = ExperimentResult(spec=spec, table=table)
        if Output.CDF in spec.outputs:
            result.cdf, result.ks_exact = cdf_rows(spec, trials, prediction_outcome.records)
        if spec.iters > 0:
            result.report = compare_report(table, spec.tolerances(), result.cdf)
        if out_dir is not None:
            result.write(out_dir)
        logger.info(
            "Finished %s: %s", spec.scenario.value,
            'PASS' if result.report is None or result.report.passed else 'FAIL',
        )
        return result

    def _fail(
        self,
        spec: ExperimentSpec,
        table: ResultTable,
        records: List[PredictionRecord],
        error: BaseException,
        out_dir: Optional[PathLike],
    ) -> ExperimentResult:
        table.rows.append(ResultRow(source=Source.FAILED, k=len(records)))
        partial = ExperimentResult(spec=spec, table=table)
        if out_dir is not None:
            partial.write(out_dir)
            logger.warning("Experiment failed; partial results flushed to %s", out_dir)
        raise ExperimentFailedError(f"Experiment failed: {error}", partial=partial, cause=error) from error

    async def sweep(
        self,
        spec: ExperimentSpec,
        parameter: str,
        values: Sequence[Any],
        out_dir: Optional[PathLike] = None,
    ) -> List[ExperimentResult]:
        """
        One experiment per value of ``parameter``; everything else, the seed
        included, stays as in ``spec``.
        """
        parameter = parameter.strip().lower()
        if parameter not in SWEEPABLE:
            raise ConfigurationError(
                f"'{parameter}' cannot be swept; choose from {sorted(SWEEPABLE)}", key=parameter
            )
        results = []
        for value in values:
            cell = spec.with_override(parameter, value)
            cell_dir = None if out_dir is None else Path(out_dir) / f"{parameter}={value}"
            results.append(await self.run(cell, cell_dir))
        return results


def run_experiment(
    spec: ExperimentSpec,
    out_dir: Optional[PathLike] = None,
    config: Optional[Config] = None,
) -> ExperimentResult:
    """Synchronous wrapper around ``ExperimentRunner.run``."""
    return asyncio.run(ExperimentRunner(config).run(spec, out_dir))


def sweep(
    spec: ExperimentSpec,
    parameter: str,
    values: Sequence[Any],
    out_dir: Optional[PathLike] = None,
    config: Optional[Config] = None,
) -> List[ExperimentResult]:
    """Synchronous wrapper around ``ExperimentRunner.sweep``."""
    return asyncio.run(ExperimentRunner(config).sweep(spec, parameter, values, out_dir))
