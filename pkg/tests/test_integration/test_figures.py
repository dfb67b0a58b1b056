import csv
import json

import numpy as np
import pytest

from dipolar_eie.experiments.figures import (
    FIGURE_PRESETS,
    ZERO_STATE_ASSUMPTION,
    emit_figure_data,
)


def read_column(path, name):
    with open(path, newline="") as csv_file:
        rows = list(csv.DictReader(csv_file))
    return np.array([float(row[name]) for row in rows])


def test_presets_cover_all_figures():
    assert sorted(FIGURE_PRESETS) == [
        "fig1",
        "fig2a",
        "fig2b",
        "fig2c",
        "fig3",
    ]
    assert FIGURE_PRESETS["fig2a"].initial_state == "singlet"
    assert FIGURE_PRESETS["fig2b"].initial_state == "triplet"
    assert FIGURE_PRESETS["fig2c"].initial_state == "dipolar_order"


def test_observable_traces(tmp_path):
    """Checks that every (alpha, kappa1) pair gets its own file and that
    the manifest lists three observables per curve."""
    manifest = emit_figure_data(
        "fig1", tmp_path, t_end=1e3, sample_count=30
    )
    assert len(manifest.curves) == 12
    assert sum(len(c["observables"]) for c in manifest.curves) == 36
    assert manifest.assumptions == [ZERO_STATE_ASSUMPTION]
    for curve in manifest.curves:
        assert (tmp_path / "fig1" / curve["file"]).exists()
    names = {curve["file"] for curve in manifest.curves}
    assert "fig1_alpha-0.9999_kappa1-0.01.csv" in names
    written = json.loads(manifest.path.read_text())
    assert written["figure"] == "fig1"
    assert len(written["curves"]) == 12


def test_polarization_builds_up_from_zero_state(tmp_path):
    manifest = emit_figure_data(
        "fig1",
        tmp_path,
        kappa1=(0.0,),
        alpha=(0.9999,),
        t_end=1e3,
        sample_count=30,
    )
    path = tmp_path / "fig1" / manifest.curves[0]["file"]
    magnetization = read_column(path, "Mz")
    assert magnetization[0] == 0.0
    assert magnetization[-1] == pytest.approx(0.9, abs=1e-3)


def test_singlet_storage_curve(tmp_path):
    manifest = emit_figure_data(
        "fig2a", tmp_path, kappa1=(0.01,), alpha=(1.0,), t_end=1e3
    )
    (curve,) = manifest.curves
    assert curve["label"] == "α = 1, κ*₁ = 0.01"
    assert curve["decay_time"] is None
    path = tmp_path / "fig2a" / curve["file"]
    concurrence = read_column(path, "concurrence")
    assert np.allclose(concurrence, 1.0, atol=1e-8)


def test_concurrence_map(tmp_path):
    manifest = emit_figure_data(
        "fig3",
        tmp_path,
        kappa1=(0.1, 1.0),
        alpha=(0.99, 1.0),
        t_end=1e3,
        sample_count=40,
    )
    (grid,) = manifest.curves
    assert grid["failed_cells"] == 0
    assert grid["file"] == "fig3.csv"
    maxima = read_column(tmp_path / "fig3" / "fig3.csv", "max_concurrence")
    assert maxima.shape == (4,)
    assert np.all((maxima >= 0) & (maxima <= 1))


def test_unknown_figure(tmp_path):
    with pytest.raises(ValueError, match="fig4"):
        emit_figure_data("fig4", tmp_path)
