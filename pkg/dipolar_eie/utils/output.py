"""The purpose of this file is to write simulation results to disk: CSV
tables for time series and grids, JSON for metadata and manifests."""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence

import numpy as np

from dipolar_eie.data_models.observable_vector import OBSERVABLE_NAMES
from dipolar_eie.data_models.results import Trajectory

logger = logging.getLogger(__name__)

TRAJECTORY_HEADER = ("t", *OBSERVABLE_NAMES, "concurrence")


def _to_builtin(value: Any):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serialisable.")


def write_json(path: Path, data: Dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as json_file:
        json.dump(data, json_file, indent=2, default=_to_builtin)
        json_file.write("\n")
    logger.info("Wrote %s", path)
    return path


def write_rows_csv(
    path: Path, header: Sequence[str], rows: Iterable[Sequence]
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as csv_file:
        writer = csv.writer(csv_file)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                ["" if value is None else _format_cell(value) for value in row]
            )
    logger.info("Wrote %s", path)
    return path


def _format_cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def write_trajectory_csv(path: Path, trajectory: Trajectory) -> Path:
    """One row per sample: t, the 15 observables and the concurrence."""
    if trajectory.concurrence is None:
        raise ValueError("Compute the concurrence before writing a CSV.")
    return write_rows_csv(path, TRAJECTORY_HEADER, trajectory.rows())
