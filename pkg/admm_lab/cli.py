"""
Command line for admm-lab.

    admm-lab gen --preset sparse_mse > sparse_mse.spec
    admm-lab run --spec sparse_mse.spec --out results/sparse_mse --workers 8
    admm-lab sweep --preset sparse_rho --parameter rho --values 0.05,0.2,0.5
    admm-lab compare --results results/sparse_mse/results.csv
    admm-lab tune --spec sparse_mse.spec --parameter lambda --values 0.02,0.05,0.1

Exit codes: 0 when every comparison passes, 2 on a tolerance failure,
1 on any error.
"""

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .config import Config
from .exceptions import AdmmLabException, ConfigurationError
from .experiments import (
    PRESETS,
    ExperimentResult,
    ExperimentRunner,
    ExperimentSpec,
    Scenario,
    apply_overrides,
    compare_report,
    dump_spec_file,
    load_spec_file,
)
from .results import CdfTable, ResultTable, Tolerances
from .tuning import select_lambda, select_rho

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TOLERANCE = 2


def _split_values(text: str) -> List[str]:
    return [item.strip() for item in text.split(',') if item.strip()]


def _add_spec_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--spec", type=Path, help="key=value spec file")
    source.add_argument("--preset", choices=sorted(PRESETS), help="built-in experiment cell")
    parser.add_argument("--seed", type=int, help="master seed (overrides the spec)")
    parser.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="replace one spec field; may be repeated",
    )


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, help="output directory (default: $ADMM_LAB_OUTPUT_DIR)")
    parser.add_argument("--workers", type=int, help="trial worker pool size")
    parser.add_argument("--progress", action="store_true", help="show a trial progress bar")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="admm-lab",
        description="ADMM compressed-sensing experiments against their state-evolution prediction",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="emit a template spec")
    gen.add_argument("--preset", choices=sorted(PRESETS), default="sparse_mse")
    gen.add_argument("--out", type=Path, help="write to this file instead of stdout")

    run = commands.add_parser("run", help="run one experiment")
    _add_spec_arguments(run)
    _add_run_arguments(run)

    sweep = commands.add_parser("sweep", help="run one experiment per parameter value")
    _add_spec_arguments(sweep)
    _add_run_arguments(sweep)
    sweep.add_argument("--parameter", required=True, help="spec field to vary")
    sweep.add_argument("--values", default="", help="comma-separated values")

    compare = commands.add_parser("compare", help="check a results.csv against tolerances")
    compare.add_argument("--results", type=Path, required=True, help="results.csv")
    compare.add_argument("--cdf", type=Path, help="cdf.csv")
    compare.add_argument("--mse-tol-db", type=float, default=1.0)
    compare.add_argument(
        "--no-mse-check", action="store_true", help="report the MSE gap without gating on it"
    )
    compare.add_argument("--ser-tol-abs", type=float, default=0.01)
    compare.add_argument("--ks-tol", type=float, default=0.05)
    compare.add_argument("--from-k", type=int, default=1)

    tune = commands.add_parser("tune", help="choose lambda or rho from predictions")
    _add_spec_arguments(tune)
    tune.add_argument("--parameter", required=True, choices=["lambda", "rho"])
    tune.add_argument("--values", required=True, help="comma-separated candidates")
    tune.add_argument("--plateau-tol", type=float, default=0.05)

    return parser


def configure_logging(verbose: int, config: Config) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, config.log_level, logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def resolve_spec(args: argparse.Namespace) -> ExperimentSpec:
    """Spec from --spec or --preset, then --seed and --override applied."""
    if args.spec is not None:
        spec = load_spec_file(args.spec)
    elif args.preset is not None:
        spec = PRESETS[args.preset]()
    else:
        raise ConfigurationError("Give --spec PATH or --preset NAME")
    if args.seed is not None:
        spec = spec.with_override('seed', args.seed)
    return apply_overrides(spec, args.override)


def _print_report(result: ExperimentResult) -> None:
    if result.report is None:
        print("no iterations to compare")
        return
    for line in result.report.summary_lines():
        print(line)
    for k, statistic in sorted(result.ks_exact.items()):
        print(f"two-sample KS k={k}: {statistic:.4f}")
    if result.output_dir is not None:
        print(f"written to {result.output_dir}")


def _passed(result: ExperimentResult) -> bool:
    return result.report is None or result.report.passed


def cmd_gen(args: argparse.Namespace, config: Config) -> int:
    text = dump_spec_file(PRESETS[args.preset](), args.out)
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_run(args: argparse.Namespace, config: Config) -> int:
    spec = resolve_spec(args)
    out = args.out or config.output_path
    result = asyncio.run(ExperimentRunner(config, progress=args.progress).run(spec, out))
    _print_report(result)
    return EXIT_OK if _passed(result) else EXIT_TOLERANCE


def cmd_sweep(args: argparse.Namespace, config: Config) -> int:
    spec = resolve_spec(args)
    values = _split_values(args.values)
    out = args.out or config.output_path
    runner = ExperimentRunner(config, progress=args.progress)
    results = asyncio.run(runner.sweep(spec, args.parameter, values, out))
    for value, result in zip(values, results):
        print(f"[{args.parameter}={value}]")
        _print_report(result)
    return EXIT_OK if all(_passed(r) for r in results) else EXIT_TOLERANCE


def cmd_compare(args: argparse.Namespace, config: Config) -> int:
    table = ResultTable.read(args.results)
    cdf = CdfTable.read(args.cdf) if args.cdf else None
    tolerances = Tolerances(
        mse_db=None if args.no_mse_check else args.mse_tol_db,
        ser_abs=args.ser_tol_abs,
        ks=args.ks_tol,
        from_k=args.from_k,
    )
    report = compare_report(table, tolerances, cdf)
    for line in report.summary_lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def cmd_tune(args: argparse.Namespace, config: Config) -> int:
    spec = resolve_spec(args)
    try:
        values = [float(v) for v in _split_values(args.values)]
    except ValueError:
        raise ConfigurationError(f"--values must be numbers, got '{args.values}'")
    common = dict(iters=spec.iters, config=spec.prediction_config(), plateau_tol=args.plateau_tol)
    if args.parameter == 'lambda':
        if spec.scenario == Scenario.BINARY_BOX:
            raise ConfigurationError("binary_box has no lambda to tune", key='lambda')
        selection = select_lambda(
            spec.prior(), spec.regularizer(), spec.delta, spec.sigma_v2, spec.rho, values, **common
        )
    else:
        selection = select_rho(
            spec.prior(), spec.regularizer(), spec.lam, spec.delta, spec.sigma_v2, values, **common
        )
    print(json.dumps(selection.to_dict(), indent=2))
    return EXIT_OK


COMMANDS = {
    'gen': cmd_gen,
    'run': cmd_run,
    'sweep': cmd_sweep,
    'compare': cmd_compare,
    'tune': cmd_tune,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = Config(workers=getattr(args, "workers", None))
        config.validate()
        configure_logging(args.verbose, config)
        return COMMANDS[args.command](args, config)
    except (AdmmLabException, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
