"""Command-line entry point: ``dipolar-eie run|sweep|figure``."""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from dipolar_eie.exceptions import ConfigError, IntegrationError
from dipolar_eie.experiments.figures import FIGURE_PRESETS, emit_figure_data
from dipolar_eie.experiments.scenario import ScenarioConfig, run_scenario
from dipolar_eie.experiments.sweep import run_sweep, write_sweep
from dipolar_eie.utils.load_user_data import read_scenario_config_from_file

logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as ConfigError instead of exiting."""

    def error(self, message: str):
        raise ConfigError("arguments", message)


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--output-dir", type=Path, default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--verbose", "-v", action="store_true")

    parser = _ArgumentParser(
        prog="dipolar-eie",
        description="Entanglement dynamics of dipolar-coupled qubit pairs.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser(
        "run", parents=[common], help="Simulate one scenario."
    )
    run.add_argument("--config", type=Path, required=True)

    sweep = commands.add_parser(
        "sweep", parents=[common], help="Run a (kappa1, alpha) grid."
    )
    sweep.add_argument("--config", type=Path, required=True)

    figure = commands.add_parser(
        "figure", parents=[common], help="Emit the data of a figure."
    )
    figure.add_argument(
        "which", choices=[*sorted(FIGURE_PRESETS), "all"]
    )
    return parser


def _load_config(args) -> ScenarioConfig:
    cfg = ScenarioConfig.from_dict(read_scenario_config_from_file(args.config))
    if args.tol is not None:
        try:
            cfg = replace(cfg, tolerance=args.tol)
        except ConfigError as error:
            raise ConfigError("--tol", str(error)) from error
    return cfg


def _run(args) -> None:
    cfg = _load_config(args)
    result = run_scenario(cfg, args.output_dir)
    logger.info(
        "Maximum concurrence %.6g at t=%.6g",
        result.max_concurrence,
        result.time_of_max,
    )


def _sweep(args) -> None:
    cfg = _load_config(args)
    result = run_sweep(cfg, workers=args.workers)
    write_sweep(result, cfg, args.output_dir or cfg.output_directory)


def _figure(args) -> None:
    figures = sorted(FIGURE_PRESETS) if args.which == "all" else [args.which]
    options = {} if args.tol is None else {"tolerance": args.tol}
    for which in figures:
        emit_figure_data(
            which,
            args.output_dir or Path("results"),
            workers=args.workers,
            **options,
        )


def _report(error: Exception) -> None:
    payload = {
        "error": type(error).__name__,
        "message": str(error),
        "field": getattr(error, "field", None),
    }
    if isinstance(error, IntegrationError):
        payload["time"] = error.time
    print(json.dumps(payload), file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as error:
        _report(error)
        return 2
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handlers = {"run": _run, "sweep": _sweep, "figure": _figure}
    try:
        handlers[args.command](args)
    except (ValueError, RuntimeError, OSError) as error:
        _report(error)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
