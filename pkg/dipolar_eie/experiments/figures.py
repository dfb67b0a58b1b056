"""The purpose of this file is to emit the data behind the standard set of
figures: observable time traces from the zero state (fig1), concurrence
storage from a singlet (fig2a), a triplet (fig2b) or dipolar order (fig2c),
and the maximum-concurrence map over (kappa1, alpha) (fig3).

Every figure writes one CSV per curve (or one grid CSV) and a manifest
JSON recording the parameters behind every file.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from dipolar_eie import __version__
from dipolar_eie.data_models.physical_params import PhysicalParams
from dipolar_eie.experiments.scenario import (
    ScenarioConfig,
    SweepGrid,
    run_scenario,
)
from dipolar_eie.experiments.sweep import run_sweep, write_sweep
from dipolar_eie.utils.formatting import curve_name, format_curve_label
from dipolar_eie.utils.output import write_json

logger = logging.getLogger(__name__)

ZERO_STATE_ASSUMPTION = (
    "Initial state for the observable traces is not specified by the"
    " model; the zero-observable state (identity / 4) is used."
)
GRID_ASSUMPTION = (
    "Grid ranges and resolution are package defaults:"
    " kappa1 log-spaced on [1e-2, 1e2], alpha linear on [0.9, 1]."
)


@dataclass(frozen=True)
class FigurePreset:
    initial_state: str
    kappa1: Sequence[float]
    alpha: Sequence[float]
    observables: Sequence[str]
    M0: float = 0.9
    t_end: float = 1e6
    assumptions: Sequence[str] = ()


FIGURE_PRESETS: Dict[str, FigurePreset] = {
    "fig1": FigurePreset(
        initial_state="zero",
        kappa1=(0.0, 0.01, 0.1, 1.0, 10.0, 100.0),
        alpha=(1.0, 0.9999),
        observables=("Mz", "Mzz", "Mc"),
        assumptions=(ZERO_STATE_ASSUMPTION,),
    ),
    "fig2a": FigurePreset(
        initial_state="singlet",
        kappa1=(0.01, 0.1, 1.0, 10.0, 100.0),
        alpha=(1.0, 0.9999),
        observables=("concurrence",),
    ),
    "fig2b": FigurePreset(
        initial_state="triplet",
        kappa1=(0.01, 0.1, 1.0, 10.0, 100.0),
        alpha=(1.0, 0.9999),
        observables=("concurrence",),
    ),
    "fig2c": FigurePreset(
        initial_state="dipolar_order",
        kappa1=(0.01, 0.1, 1.0, 10.0, 100.0),
        alpha=(1.0, 0.9999),
        observables=("concurrence",),
    ),
    "fig3": FigurePreset(
        initial_state="dipolar_order",
        kappa1=tuple(np.geomspace(1e-2, 1e2, 20)),
        alpha=tuple(np.linspace(0.9, 1.0, 20)),
        observables=("max_concurrence",),
        assumptions=(GRID_ASSUMPTION,),
    ),
}


@dataclass
class FigureManifest:
    figure: str
    directory: Path
    curves: List[Dict[str, Any]] = field(default_factory=list)
    assumptions: List[str] = field(default_factory=list)
    path: Optional[Path] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "figure": self.figure,
            "version": __version__,
            "curves": self.curves,
            "assumptions": self.assumptions,
        }


def _config(
    preset: FigurePreset, kappa1: float, alpha: float, name: str, **options
) -> ScenarioConfig:
    return ScenarioConfig(
        params=PhysicalParams.from_scaled(
            kappa1=kappa1, M0=preset.M0, alpha=alpha
        ),
        initial_state=preset.initial_state,
        output_name=name,
        assumptions=tuple(preset.assumptions),
        **options,
    )


def emit_figure_data(
    which: str,
    output_directory: Path,
    kappa1: Optional[Sequence[float]] = None,
    alpha: Optional[Sequence[float]] = None,
    workers: int = 1,
    **options,
) -> FigureManifest:
    """Writes the data files of one figure plus its manifest.

    kappa1 and alpha override the preset parameter sets; further keyword
    options (t_end, sample_count, tolerance, ...) go to ScenarioConfig.
    """
    if which not in FIGURE_PRESETS:
        raise ValueError(
            f"Unknown figure {which!r}, expected one of"
            f" {sorted(FIGURE_PRESETS)}."
        )
    preset = FIGURE_PRESETS[which]
    kappa1 = tuple(preset.kappa1 if kappa1 is None else kappa1)
    alpha = tuple(preset.alpha if alpha is None else alpha)
    options.setdefault("t_end", preset.t_end)
    directory = Path(output_directory) / which
    manifest = FigureManifest(
        figure=which,
        directory=directory,
        assumptions=list(preset.assumptions),
    )

    if which == "fig3":
        cfg = _config(
            preset,
            kappa1[0],
            alpha[0],
            which,
            sweep=SweepGrid(kappa1=kappa1, alpha=alpha),
            **options,
        )
        result = run_sweep(cfg, workers=workers)
        files = write_sweep(result, cfg, directory)
        manifest.curves.append(
            {
                "file": files[0].name,
                "kappa1": list(kappa1),
                "alpha": list(alpha),
                "kappa2_ratio": 1.0,
                "M0": preset.M0,
                "initial_state": preset.initial_state,
                "observables": list(preset.observables),
                "failed_cells": len(result.failed_cells),
            }
        )
    else:
        for a in alpha:
            for k in kappa1:
                name = curve_name(which, alpha=a, kappa1=k)
                result = run_scenario(
                    _config(preset, k, a, name, **options), directory
                )
                manifest.curves.append(
                    {
                        "file": result.files[0].name,
                        "label": format_curve_label(
                            {"alpha": a, "kappa1": k}
                        ),
                        "kappa1": k,
                        "kappa2": k,
                        "alpha": a,
                        "M0": preset.M0,
                        "initial_state": preset.initial_state,
                        "observables": list(preset.observables),
                        "max_concurrence": result.max_concurrence,
                        "decay_time": result.decay_time,
                    }
                )

    manifest.path = write_json(
        directory / "manifest.json", manifest.to_dict()
    )
    logger.info(
        "Emitted %s: %d curve file(s) in %s",
        which,
        len(manifest.curves),
        directory,
    )
    return manifest
