import csv
import json
from pathlib import Path

import numpy as np
import pytest

from dipolar_eie.data_models.results import Trajectory
from dipolar_eie.utils.output import (
    TRAJECTORY_HEADER,
    write_json,
    write_rows_csv,
    write_trajectory_csv,
)


def read_csv(path):
    with open(path, newline="") as csv_file:
        return list(csv.reader(csv_file))


def test_write_json_converts_numpy_values(tmp_path):
    path = write_json(
        tmp_path / "nested" / "meta.json",
        {
            "array": np.arange(3),
            "scalar": np.float64(0.5),
            "path": Path("results"),
        },
    )
    assert json.loads(path.read_text()) == {
        "array": [0, 1, 2],
        "scalar": 0.5,
        "path": "results",
    }


def test_write_json_rejects_unknown_objects(tmp_path):
    with pytest.raises(TypeError):
        write_json(tmp_path / "meta.json", {"value": object()})


def test_write_rows_csv(tmp_path):
    """Checks that missing values become empty cells and floats keep
    full precision."""
    path = write_rows_csv(
        tmp_path / "table.csv",
        ("a", "b", "c"),
        [[0.1 + 0.2, None, "ok"]],
    )
    rows = read_csv(path)
    assert rows[0] == ["a", "b", "c"]
    assert rows[1] == [repr(0.1 + 0.2), "", "ok"]
    assert float(rows[1][0]) == 0.1 + 0.2


def test_write_trajectory_csv(tmp_path):
    trajectory = Trajectory(
        times=[0.0, 1.0], states=np.zeros((2, 15)), concurrence=[0.0, 0.5]
    )
    rows = read_csv(write_trajectory_csv(tmp_path / "t.csv", trajectory))
    assert tuple(rows[0]) == TRAJECTORY_HEADER
    assert len(rows) == 3
    assert rows[2][0] == "1.0"
    assert rows[2][-1] == "0.5"


def test_trajectory_csv_needs_concurrence(tmp_path):
    trajectory = Trajectory(times=[0.0], states=np.zeros((1, 15)))
    with pytest.raises(ValueError):
        write_trajectory_csv(tmp_path / "t.csv", trajectory)
