"""Full-scale reproduction audit for admm-lab.

Runs every experiment cell at its full preset size and prints a
phase-by-phase PASS / FAIL / SKIP summary. Phases are independent: one
failure does not stop later phases.

Environment variables:
    ADMM_LAB_OUTPUT_DIR     Optional. Root for per-phase output. Defaults to ./results
    ADMM_LAB_WORKERS        Optional. Trial worker pool size. Defaults to the CPU count
    ADMM_LAB_REPRO_PHASES   Optional. Comma-separated phase numbers to run; the
                            others are reported as SKIP. Defaults to all.
    ADMM_LAB_REPRO_N        Optional. Signal length for the sparse_mse cell. Defaults to 500

Usage:
    python scripts/reproduce_cells.py
"""

from __future__ import annotations

import asyncio
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Awaitable, Callable, Dict, List, Optional, Set

import numpy as np

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from admm_lab import (
    AdmmConfig,
    BoxIndicator,
    Config,
    ExperimentResult,
    ExperimentRunner,
    ExperimentSpec,
    FactorizationMethod,
    L1,
    MatrixEnsemble,
    PredictionConfig,
    SaddleObjective,
    SignalPrior,
    Source,
    generate_instance,
    init_ensemble,
    iterations_to_plateau,
    make_rng,
    predict_trajectory,
    prepare,
    run,
    solve_saddle,
)

PhaseFn = Callable[[], Awaitable[None]]


@dataclass
class PhaseResult:
    name: str
    status: str
    detail: str = ""
    duration_seconds: float = 0.0


class SkipPhase(Exception):
    pass


def _worst_gap(result: ExperimentResult) -> str:
    report = result.report
    parts = []
    if report.worst_mse_gap_db is not None:
        parts.append(f"MSE {report.worst_mse_gap_db:.3f} dB")
    if report.worst_ser_gap is not None:
        parts.append(f"SER {report.worst_ser_gap:.4f}")
    for k, distance in sorted(report.ks_distances.items()):
        parts.append(f"KS(k={k}) {distance:.4f}")
    return ", ".join(parts)


def _mass_near(grid: np.ndarray, cdf: np.ndarray, centre: float, width: float = 0.1) -> float:
    return float(np.interp(centre + width, grid, cdf) - np.interp(centre - width, grid, cdf))


def _require_pass(result: ExperimentResult, label: str) -> None:
    if result.report is None or not result.report.passed:
        raise AssertionError(f"{label} outside tolerance: {_worst_gap(result)}")


def _grid_min_max(fn, lo: float, hi: float, step: float, chunk: int = 200):
    """(alpha, beta) of min over alpha of max over beta on the square [lo, hi) grid."""
    grid = np.arange(lo, hi, step)
    row_max = np.empty(grid.size)
    row_arg = np.empty(grid.size, dtype=np.int64)
    for start in range(0, grid.size, chunk):
        values = fn(grid[start:start + chunk, None], grid[None, :])
        row_max[start:start + chunk] = values.max(axis=1)
        row_arg[start:start + chunk] = values.argmax(axis=1)
    i = int(np.argmin(row_max))
    return float(grid[i]), float(grid[row_arg[i]])


class ReproductionRunner:
    def __init__(self, config: Config, selected: Optional[Set[int]] = None) -> None:
        self.config = config
        self.runner = ExperimentRunner(config, progress=True)
        self.out = config.output_path
        self.selected = selected
        self.results: List[PhaseResult] = []
        self.sparse_mse: Optional[ExperimentResult] = None

    async def run(self) -> int:
        phases: List[tuple[str, PhaseFn]] = [
            ("1. Prox exactness", self.phase_prox),
            ("2. ADMM correctness", self.phase_admm),
            ("3. Saddle solver", self.phase_saddle),
            ("4. Sparse MSE (sparse_mse)", self.phase_sparse_mse),
            ("5. Corollary consistency", self.phase_corollary),
            ("6. Matrix universality (sparse_ensembles)", self.phase_sparse_ensembles),
            ("7. rho sensitivity (sparse_rho)", self.phase_sparse_rho),
            ("8. Binary SER (binary_ser)", self.phase_binary_ser),
            ("9. Estimate CDF (binary_cdf)", self.phase_binary_cdf),
            ("10. Determinism", self.phase_determinism),
        ]

        for number, (name, phase) in enumerate(phases, start=1):
            await self._run_phase(number, name, phase)

        self._print_summary()
        failed = sum(1 for result in self.results if result.status == "FAIL")
        return 1 if failed else 0

    async def _run_phase(self, number: int, name: str, phase: PhaseFn) -> None:
        started = time.perf_counter()
        try:
            if self.selected is not None and number not in self.selected:
                raise SkipPhase("not selected")
            await phase()
        except SkipPhase as exc:
            self.results.append(PhaseResult(name=name, status="SKIP", detail=str(exc)))
            print(f"SKIP  {name}: {exc}")
            return
        except (Exception, asyncio.CancelledError) as exc:
            detail = self._format_exception(exc)
            self.results.append(
                PhaseResult(
                    name=name,
                    status="FAIL",
                    detail=detail,
                    duration_seconds=time.perf_counter() - started,
                )
            )
            print(f"FAIL  {name}: {detail}")
            return

        duration = time.perf_counter() - started
        self.results.append(PhaseResult(name=name, status="PASS", duration_seconds=duration))
        print(f"PASS  {name} ({duration:.2f}s)")

    # ── phases ───────────────────────────────────────────────

    async def phase_prox(self) -> None:
        rng = make_rng(0)
        gammas = rng.uniform(0.01, 3.0, 10_000)
        r = rng.uniform(-5.0, 5.0, 10_000)
        soft = np.sign(r) * np.maximum(np.abs(r) - gammas, 0.0)
        if np.max(np.abs(L1().prox(gammas, r) - soft)) > 1e-12:
            raise AssertionError("soft threshold disagrees with its closed form")
        if np.max(np.abs(BoxIndicator().prox(gammas, r) - np.clip(r, -1.0, 1.0))) > 1e-12:
            raise AssertionError("box projection disagrees with clip")

    async def phase_admm(self) -> None:
        for seed in range(20):
            instance = generate_instance(
                SignalPrior.bernoulli_gaussian(0.8), MatrixEnsemble.GAUSSIAN_IID, 200, 0.8, 0.001,
                make_rng(seed),
            )
            trajectory = run(instance, AdmmConfig(rho=1.0, lam=0.05, max_iter=2000), L1())
            residual = trajectory.records[-1].primal_residual
            if residual >= 1e-5:
                raise AssertionError(f"seed {seed}: primal residual {residual:.2e} after 2000 iterations")
            b = make_rng(seed, 9).standard_normal(instance.n)
            direct = prepare(instance.A, 1.0, FactorizationMethod.DIRECT).solve(b)
            woodbury = prepare(instance.A, 1.0, FactorizationMethod.WOODBURY).solve(b)
            if np.linalg.norm(direct - woodbury) > 1e-8 * np.linalg.norm(direct):
                raise AssertionError(f"seed {seed}: woodbury and direct solves disagree")

    async def phase_saddle(self) -> None:
        for spec in (ExperimentSpec.sparse_mse(), ExperimentSpec.sparse_rho()):
            config = PredictionConfig(particles=10_000)
            ensemble = init_ensemble(spec.prior(), config.particles, make_rng(0, 1))
            h = make_rng(0, 2).standard_normal(ensemble.P)
            fn = SaddleObjective(ensemble, h, spec.delta, spec.sigma_v2, spec.rho)
            saddle = solve_saddle(ensemble, h, spec.delta, spec.sigma_v2, spec.rho, config, fn)
            alpha, beta = _grid_min_max(fn, *config.alpha_range, 1e-3)
            if abs(alpha - saddle.alpha_star) > 2e-3 or abs(beta - saddle.beta_star) > 2e-3:
                raise AssertionError(f"grid oracle disagrees at delta={spec.delta}")

    async def phase_sparse_mse(self) -> None:
        n = int(os.getenv("ADMM_LAB_REPRO_N", "500"))
        spec = ExperimentSpec.sparse_mse().with_override("n", n)
        self.sparse_mse = await self.runner.run(spec, self.out / "sparse_mse")
        final_gap = abs(self.sparse_mse.report.gaps[-1].mse_gap_db)
        if final_gap > 1.0:
            raise AssertionError(f"final MSE gap {final_gap:.2f} dB exceeds 1 dB")
        _require_pass(self.sparse_mse, "sparse_mse")

    async def phase_corollary(self) -> None:
        spec = ExperimentSpec.sparse_mse()
        trajectory = predict_trajectory(
            spec.prior(), spec.regularizer(), spec.lam, spec.delta, spec.sigma_v2, spec.rho,
            spec.iters, spec.prediction_config(),
        )
        for record in trajectory.records:
            corollary = record.predicted_mse_corollary_raw
            gap = abs(record.predicted_mse_ensemble - corollary) / max(1e-6, corollary)
            if gap > 0.05:
                raise AssertionError(f"k={record.k}: ensemble and corollary MSE differ by {gap:.1%}")

    async def phase_sparse_ensembles(self) -> None:
        spec = ExperimentSpec.sparse_ensembles()
        results = await self.runner.sweep(
            spec, "matrix_ensemble", [e.value for e in MatrixEnsemble], self.out / "sparse_ensembles"
        )
        for result in results:
            _require_pass(result, result.spec.matrix_ensemble.value)

    async def phase_sparse_rho(self) -> None:
        rhos = [0.05, 0.2, 0.5]
        results = await self.runner.sweep(ExperimentSpec.sparse_rho(), "rho", rhos, self.out / "sparse_rho")
        plateaus: Dict[float, int] = {}
        for rho, result in zip(rhos, results):
            _require_pass(result, f"rho={rho}")
            pred = [r.mse_mean for r in result.table.by_source(Source.PREDICTION)]
            plateaus[rho] = iterations_to_plateau(pred)
        if len(set(plateaus.values())) == 1:
            raise AssertionError(f"rho does not change the predicted plateau: {plateaus}")
        print(f"      iterations to plateau: {plateaus}")

    async def phase_binary_ser(self) -> None:
        results = await self.runner.sweep(
            ExperimentSpec.binary_ser(), "delta", [0.7, 0.8, 0.9], self.out / "binary_ser"
        )
        for result in results:
            _require_pass(result, f"delta={result.spec.delta}")

    async def phase_binary_cdf(self) -> None:
        spec = ExperimentSpec.binary_cdf()
        result = await self.runner.run(spec, self.out / "binary_cdf")
        _require_pass(result, "binary_cdf")
        grid = spec.cdf_grid()
        mass = []
        for k in spec.cdf_iters:
            rows = [r for r in result.cdf.rows if r.k == k]
            emp = np.array([r.cdf_empirical for r in rows])
            mass.append(_mass_near(grid, emp, -1.0) + _mass_near(grid, emp, 1.0))
        if not all(a < b for a, b in zip(mass, mass[1:])):
            raise AssertionError(f"mass near ±1 does not grow with k: {mass}")

    async def phase_determinism(self) -> None:
        if self.sparse_mse is None:
            raise SkipPhase("sparse_mse phase did not produce a result")
        again = await self.runner.run(self.sparse_mse.spec, self.out / "sparse_mse-rerun")
        first = (self.out / "sparse_mse" / "results.csv").read_bytes()
        second = (again.output_dir / "results.csv").read_bytes()
        if first != second:
            raise AssertionError("rerun with the same seed produced a different results.csv")

    # ── reporting ────────────────────────────────────────────

    def _print_summary(self) -> None:
        print("")
        print("Summary")
        print("-------")
        for result in self.results:
            line = f"{result.status:<4}  {result.name}"
            if result.duration_seconds:
                line += f" ({result.duration_seconds:.1f}s)"
            if result.detail and result.status != "PASS":
                line += f" - {result.detail}"
            print(line)
        counts = {s: sum(1 for r in self.results if r.status == s) for s in ("PASS", "FAIL", "SKIP")}
        print(f"\n{counts['PASS']} passed, {counts['FAIL']} failed, {counts['SKIP']} skipped")

    @staticmethod
    def _format_exception(exc: BaseException) -> str:
        if isinstance(exc, AssertionError):
            return str(exc)
        return f"{exc.__class__.__name__}: {exc}"


def _selected_phases() -> Optional[Set[int]]:
    raw = os.getenv("ADMM_LAB_REPRO_PHASES")
    if not raw:
        return None
    try:
        return {int(p) for p in raw.split(",") if p.strip()}
    except ValueError:
        raise SystemExit(f"ADMM_LAB_REPRO_PHASES must be comma-separated integers, got {raw!r}")


async def _main() -> int:
    config = Config()
    config.validate()
    return await ReproductionRunner(config, _selected_phases()).run()


def main() -> None:
    raise SystemExit(asyncio.run(_main()))


if __name__ == "__main__":
    main()
