"""The purpose of this file is to run the scenario over a (kappa1, alpha)
grid and collect the concurrence maximum of every cell.

Cells are independent and run in parallel through joblib; results are
gathered in grid order, so the outcome does not depend on the worker
count.
"""

import itertools
import logging
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from dipolar_eie.experiments.scenario import (
    ScenarioConfig,
    SweepGrid,
    simulate,
    with_scaled_rates,
)
from dipolar_eie.utils.output import write_json, write_rows_csv

logger = logging.getLogger(__name__)

CELL_HEADER = (
    "kappa1",
    "kappa2",
    "alpha",
    "max_concurrence",
    "time_of_max",
    "decay_time",
    "steady_Mz",
    "steady_Mzz",
    "steady_Mc",
    "error",
)


@dataclass(frozen=True)
class SweepCell:
    kappa1: float
    kappa2: float
    alpha: float
    max_concurrence: Optional[float] = None
    time_of_max: Optional[float] = None
    decay_time: Optional[float] = None
    steady_state: Optional[Tuple[float, float, float]] = None
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def row(self) -> List[Any]:
        steady = self.steady_state or (None, None, None)
        return [
            self.kappa1,
            self.kappa2,
            self.alpha,
            self.max_concurrence,
            self.time_of_max,
            self.decay_time,
            *steady,
            self.error,
        ]


@dataclass
class SweepResult:
    """Cells in row-major order: kappa1 outer, alpha inner."""

    kappa1: Tuple[float, ...]
    alpha: Tuple[float, ...]
    cells: List[SweepCell]

    def __post_init__(self):
        if len(self.cells) != len(self.kappa1) * len(self.alpha):
            raise ValueError(
                f"{len(self.cells)} cells do not fill a"
                f" {len(self.kappa1)}x{len(self.alpha)} grid."
            )

    @property
    def failed_cells(self) -> List[SweepCell]:
        return [cell for cell in self.cells if cell.failed]

    def max_concurrence_grid(self) -> np.ndarray:
        """Array of shape (len(kappa1), len(alpha)); NaN for failed cells."""
        values = [
            np.nan if cell.failed else cell.max_concurrence
            for cell in self.cells
        ]
        return np.array(values, dtype=float).reshape(
            len(self.kappa1), len(self.alpha)
        )

    def summary(self) -> Dict[str, Any]:
        return {
            "cells": len(self.cells),
            "failed": [asdict(cell) for cell in self.failed_cells],
        }


def run_cell(cfg: ScenarioConfig, kappa1: float, alpha: float) -> SweepCell:
    """Runs the scenario of one grid cell; failures are recorded."""
    kappa2 = cfg.sweep.kappa2_ratio * kappa1
    try:
        params = with_scaled_rates(cfg.params, kappa1, kappa2, alpha)
        result = simulate(replace(cfg, params=params, sweep=None))
    except (ValueError, RuntimeError, ArithmeticError) as error:
        logger.warning(
            "Sweep cell kappa1=%g alpha=%g failed: %s", kappa1, alpha, error
        )
        return SweepCell(
            kappa1, kappa2, alpha, error=f"{type(error).__name__}: {error}"
        )
    steady = result.steady_state.values
    return SweepCell(
        kappa1=kappa1,
        kappa2=kappa2,
        alpha=alpha,
        max_concurrence=result.max_concurrence,
        time_of_max=result.time_of_max,
        decay_time=result.decay_time,
        steady_state=(steady.Mz, steady.Mzz, steady.Mc),
    )


def run_sweep(cfg: ScenarioConfig, workers: int = 1) -> SweepResult:
    """Evaluates every (kappa1, alpha) cell of cfg.sweep.

    Every cell starts from cfg's initial state (dipolar order unless
    configured otherwise).
    """
    if cfg.sweep is None:
        cfg = replace(cfg, sweep=SweepGrid())
    grid = list(itertools.product(cfg.sweep.kappa1, cfg.sweep.alpha))
    logger.info(
        "Running %d sweep cells on %d worker(s)", len(grid), workers
    )
    cells = Parallel(n_jobs=workers)(
        delayed(run_cell)(cfg, kappa1, alpha) for kappa1, alpha in grid
    )
    result = SweepResult(cfg.sweep.kappa1, cfg.sweep.alpha, list(cells))
    if result.failed_cells:
        logger.warning(
            "%d of %d sweep cells failed",
            len(result.failed_cells),
            len(grid),
        )
    return result


def write_sweep(
    result: SweepResult, cfg: ScenarioConfig, directory: Path
) -> List[Path]:
    """Writes the per-cell table and its metadata JSON."""
    directory, name = Path(directory), cfg.output_name
    table = write_rows_csv(
        directory / f"{name}.csv",
        CELL_HEADER,
        (cell.row() for cell in result.cells),
    )
    meta = write_json(
        directory / f"{name}.meta.json",
        {"config": cfg.to_dict(), "summary": result.summary()},
    )
    return [table, meta]
