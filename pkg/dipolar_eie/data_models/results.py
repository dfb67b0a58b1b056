"""The purpose of this file is to provide containers for what the
simulations produce: trajectories, steady states and concurrence values.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from dipolar_eie.data_models.observable_vector import (
    OBSERVABLE_NAMES,
    ObservableVector,
)

CONCURRENCE_ROUTES = ("wootters", "hermitian", "closed_form")
STEADY_STATE_MODES = ("regular", "conserved_manifold")


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    route: str
    lambdas: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.route not in CONCURRENCE_ROUTES:
            raise ValueError(f"Unknown concurrence route {self.route!r}.")
        if not -1e-10 <= self.value <= 1 + 1e-10:
            raise ValueError(
                f"Concurrence {self.value} lies outside [0, 1]."
            )


@dataclass
class Trajectory:
    """Observables sampled at strictly increasing times.

    states has one row per time, columns in OBSERVABLE_NAMES order.
    dense, when present, evaluates the integrator's interpolant and
    returns observable rows for an array of times.
    """

    times: np.ndarray
    states: np.ndarray
    meta: Dict[str, Any] = field(default_factory=dict)
    concurrence: Optional[np.ndarray] = None
    dense: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=float)
        if self.times.ndim != 1 or len(self.times) == 0:
            raise ValueError("A trajectory needs a non-empty 1-d time axis.")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("Trajectory times must be strictly increasing.")
        if self.states.shape != (len(self.times), len(OBSERVABLE_NAMES)):
            raise ValueError(
                f"States of shape {self.states.shape} do not match"
                f" {len(self.times)} samples of"
                f" {len(OBSERVABLE_NAMES)} observables."
            )

    def __len__(self):
        return len(self.times)

    def observable(self, name: str) -> np.ndarray:
        return self.states[:, OBSERVABLE_NAMES.index(name)]

    def state_at(self, index: int) -> ObservableVector:
        return ObservableVector.from_array(self.states[index])

    def final_state(self) -> ObservableVector:
        return self.state_at(-1)

    def rows(self) -> List[List[float]]:
        """Rows of t, the observables and (if computed) the concurrence."""
        rows = []
        for i, t in enumerate(self.times):
            row = [float(t), *self.states[i].tolist()]
            if self.concurrence is not None:
                row.append(float(self.concurrence[i]))
            rows.append(row)
        return rows


@dataclass(frozen=True)
class SteadyState:
    """Block-1 steady state, all other observables zero.

    In conserved_manifold mode (alpha = 1) the value depends on the
    initial Mc + Mzz, recorded as F.
    """

    values: ObservableVector
    mode: str
    residual: float = 0.0
    F: Optional[float] = None

    def __post_init__(self):
        if self.mode not in STEADY_STATE_MODES:
            raise ValueError(f"Unknown steady-state mode {self.mode!r}.")
        if self.mode == "conserved_manifold" and self.F is None:
            raise ValueError("A conserved-manifold steady state needs F.")

    def to_dict(self, params: Optional[Dict] = None) -> Dict[str, Any]:
        return {
            "params": params,
            "mode": self.mode,
            "values": self.values.to_dict(),
            "residual": self.residual,
            "F": self.F,
        }
