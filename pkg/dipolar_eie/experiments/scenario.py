"""The purpose of this file is to provide the scenario runner: a validated
configuration, the named initial states and the evaluation of one time
trace (integration, concurrence, maximum and decay time)."""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from dipolar_eie import __version__
from dipolar_eie.data_models.observable_vector import ObservableVector
from dipolar_eie.data_models.physical_params import (
    AngularConfig,
    PhysicalParams,
    ScaledRates,
)
from dipolar_eie.data_models.results import SteadyState, Trajectory
from dipolar_eie.dynamics import integrate, sample_times, steady_state
from dipolar_eie.entanglement import concurrence_guard, concurrence_series
from dipolar_eie.exceptions import ConfigError
from dipolar_eie.master_equation import assemble_liouvillian, compute_rates
from dipolar_eie.observable_space import resolve_block_system
from dipolar_eie.utils.output import write_json, write_trajectory_csv

logger = logging.getLogger(__name__)

PRESETS = ("singlet", "triplet", "dipolar_order", "zero", "thermal")
REPRESENTATIONS = ("block", "liouvillian")
SPACINGS = ("log", "linear")
_SCALAR_KEYS = (
    "t_end",
    "t_min",
    "sample_count",
    "spacing",
    "representation",
    "tolerance",
)
_CONFIG_KEYS = ("params", "initial_state", "sweep", "output", *_SCALAR_KEYS)


def initial_state_vector(
    preset: Union[str, ObservableVector], params: PhysicalParams
) -> ObservableVector:
    """Expands a named initial state into its observables."""
    if isinstance(preset, ObservableVector):
        return preset
    if preset == "singlet":
        return ObservableVector(Mzz=-0.25, Mc=-0.5)
    if preset == "triplet":
        return ObservableVector(Mzz=-0.25, Mc=0.5)
    if preset == "dipolar_order":
        return ObservableVector(Mzz=-0.25)
    if preset == "zero":
        return ObservableVector()
    if preset == "thermal":
        return ObservableVector(Mz=params.M0, Mzz=params.M0**2 / 4)
    raise ValueError(
        f"Unknown initial state {preset!r}, expected one of {PRESETS}"
        " or a custom observable vector."
    )


@dataclass(frozen=True)
class SweepGrid:
    """Grid over (kappa1, alpha); kappa2 = kappa2_ratio * kappa1."""

    kappa1: Tuple[float, ...] = tuple(np.geomspace(1e-2, 1e2, 20))
    alpha: Tuple[float, ...] = tuple(np.linspace(0.9, 1.0, 20))
    kappa2_ratio: float = 1.0

    def __post_init__(self):
        if not self.kappa1:
            raise ConfigError("sweep.kappa1", "The grid axis is empty.")
        if not self.alpha:
            raise ConfigError("sweep.alpha", "The grid axis is empty.")
        if any(k < 0 for k in self.kappa1):
            raise ConfigError("sweep.kappa1", "Rates must be non-negative.")
        if any(not 0 <= a <= 1 for a in self.alpha):
            raise ConfigError("sweep.alpha", "alpha must lie in [0, 1].")
        if self.kappa2_ratio < 0:
            raise ConfigError(
                "sweep.kappa2_ratio", "The ratio must be non-negative."
            )
        object.__setattr__(self, "kappa1", tuple(map(float, self.kappa1)))
        object.__setattr__(self, "alpha", tuple(map(float, self.alpha)))


@dataclass(frozen=True)
class ScenarioConfig:
    params: PhysicalParams = field(default_factory=PhysicalParams)
    initial_state: Union[str, ObservableVector] = "dipolar_order"
    t_end: float = 1e6
    t_min: float = 1e-3
    sample_count: int = 200
    spacing: str = "log"
    representation: str = "block"
    tolerance: float = 1e-10
    sweep: Optional[SweepGrid] = None
    output_directory: Path = Path("results")
    output_name: str = "scenario"
    assumptions: Tuple[str, ...] = ()

    def __post_init__(self):
        if isinstance(self.initial_state, str):
            if self.initial_state not in PRESETS:
                raise ConfigError(
                    "initial_state",
                    f"{self.initial_state!r} is not one of {PRESETS}.",
                )
        if not self.t_end > 0:
            raise ConfigError("t_end", f"must be positive, got {self.t_end}.")
        if self.spacing not in SPACINGS:
            raise ConfigError("spacing", f"must be one of {SPACINGS}.")
        if self.spacing == "log" and not 0 < self.t_min < self.t_end:
            raise ConfigError("t_min", "must lie in (0, t_end).")
        if int(self.sample_count) != self.sample_count or (
            self.sample_count < 2
        ):
            raise ConfigError(
                "sample_count",
                f"must be an integer >= 2, got {self.sample_count}.",
            )
        if self.representation not in REPRESENTATIONS:
            raise ConfigError(
                "representation", f"must be one of {REPRESENTATIONS}."
            )
        if not 1e-14 < self.tolerance < 1e-3:
            raise ConfigError("tolerance", "must lie in (1e-14, 1e-3).")
        object.__setattr__(
            self, "output_directory", Path(self.output_directory)
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScenarioConfig":
        """Builds a validated configuration from parsed JSON.

        Invalid entries raise ConfigError naming the offending field.
        """
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown configuration key.")

        options: Dict[str, Any] = {}
        options["params"] = _params_from_dict(data.get("params", {}))
        if "initial_state" in data:
            options["initial_state"] = _initial_state_from_dict(
                data["initial_state"]
            )
        for key in _SCALAR_KEYS:
            if key in data:
                options[key] = _scalar_from_dict(key, data[key])
        if "sweep" in data:
            options["sweep"] = _sweep_from_dict(data["sweep"])
        output = data.get("output", {})
        if not isinstance(output, dict):
            raise ConfigError("output", "expected an object.")
        for key in ("directory", "name"):
            if not isinstance(output.get(key, ""), str):
                raise ConfigError(f"output.{key}", "expected a string.")
        if "directory" in output:
            options["output_directory"] = Path(output["directory"])
        if "name" in output:
            options["output_name"] = output["name"]
        try:
            return cls(**options)
        except (TypeError, ValueError) as error:
            if isinstance(error, ConfigError):
                raise
            raise ConfigError("config", str(error)) from error

    def initial_vector(self) -> ObservableVector:
        return initial_state_vector(self.initial_state, self.params)

    def times(self) -> np.ndarray:
        return sample_times(
            self.t_end, self.sample_count, self.spacing, self.t_min
        )

    def to_dict(self) -> Dict[str, Any]:
        """All resolved settings, as echoed into result metadata."""
        initial = self.initial_state
        return {
            "params": self.params.to_dict(),
            "initial_state": (
                {"custom": initial.to_dict()}
                if isinstance(initial, ObservableVector)
                else initial
            ),
            "initial_observables": self.initial_vector().to_dict(),
            "t_end": self.t_end,
            "t_min": self.t_min,
            "sample_count": self.sample_count,
            "spacing": self.spacing,
            "representation": self.representation,
            "tolerance": self.tolerance,
            "sweep": None
            if self.sweep is None
            else {
                "kappa1": list(self.sweep.kappa1),
                "alpha": list(self.sweep.alpha),
                "kappa2_ratio": self.sweep.kappa2_ratio,
            },
            "output": {
                "directory": str(self.output_directory),
                "name": self.output_name,
            },
            "assumptions": list(self.assumptions),
        }


_PARAM_KEYS = {
    "J",
    "delta_omega",
    "M0",
    "alpha",
    "omega0",
    "tau_c",
    "omega_d",
}


def _number(field_name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(field_name, f"expected a number, got {value!r}.")
    return float(value)


def _scalar_from_dict(key: str, value):
    if key in ("spacing", "representation"):
        if not isinstance(value, str):
            raise ConfigError(key, f"expected a string, got {value!r}.")
        return value
    if key == "sample_count":
        count = _number(key, value)
        if not count.is_integer():
            raise ConfigError(key, f"must be an integer, got {value!r}.")
        return int(count)
    return _number(key, value)


def _params_from_dict(data: Dict[str, Any]) -> PhysicalParams:
    if not isinstance(data, dict):
        raise ConfigError("params", "expected an object.")
    allowed = _PARAM_KEYS | {"theta", "phi", "scaled_rates"}
    for key in data:
        if key not in allowed:
            raise ConfigError(f"params.{key}", "unknown parameter.")
    angles = {
        name: _number(f"params.{name}", data[name])
        for name in ("theta", "phi")
        if name in data
    }
    try:
        ang = AngularConfig(**angles)
    except ValueError as error:
        name = "theta" if "theta" in str(error).lower() else "phi"
        raise ConfigError(f"params.{name}", str(error)) from error
    scaled = None
    if "scaled_rates" in data:
        entries = data["scaled_rates"]
        if not isinstance(entries, dict):
            raise ConfigError("params.scaled_rates", "expected an object.")
        try:
            scaled = ScaledRates(
                **{
                    name: _number(f"params.scaled_rates.{name}", value)
                    for name, value in entries.items()
                }
            )
        except (TypeError, ValueError) as error:
            if isinstance(error, ConfigError):
                raise
            raise ConfigError("params.scaled_rates", str(error)) from error
    values = {
        key: _number(f"params.{key}", data[key])
        for key in _PARAM_KEYS
        if key in data
    }
    try:
        return PhysicalParams(ang=ang, scaled_rates=scaled, **values)
    except ValueError as error:
        message = str(error)
        culprit = next(
            (key for key in sorted(_PARAM_KEYS) if message.startswith(key)),
            "params",
        )
        field_name = culprit if culprit == "params" else f"params.{culprit}"
        raise ConfigError(field_name, message) from error


def _initial_state_from_dict(value) -> Union[str, ObservableVector]:
    if isinstance(value, str):
        return value
    if isinstance(value, dict) and set(value) == {"custom"}:
        try:
            return ObservableVector.from_mapping(value["custom"])
        except (TypeError, ValueError) as error:
            raise ConfigError("initial_state.custom", str(error)) from error
    raise ConfigError(
        "initial_state", "expected a preset name or {'custom': {...}}."
    )


def _axis_from_dict(name: str, value) -> Tuple[float, ...]:
    field_name = f"sweep.{name}"
    if isinstance(value, list):
        return tuple(_number(field_name, x) for x in value)
    if isinstance(value, dict) and len(value) == 1:
        kind, bounds = next(iter(value.items()))
        if (
            kind in ("log", "linear")
            and isinstance(bounds, list)
            and len(bounds) == 3
        ):
            start, stop, count = (_number(field_name, x) for x in bounds)
            if not count.is_integer() or count < 1:
                raise ConfigError(
                    field_name, "the point count must be a positive integer."
                )
            if kind == "log":
                if start <= 0 or stop <= 0:
                    raise ConfigError(
                        f"sweep.{name}", "log axes need positive bounds."
                    )
                return tuple(np.geomspace(start, stop, int(count)))
            return tuple(np.linspace(start, stop, int(count)))
    raise ConfigError(
        f"sweep.{name}",
        "expected a list or {'log'|'linear': [start, stop, count]}.",
    )


def _sweep_from_dict(data: Dict[str, Any]) -> SweepGrid:
    if not isinstance(data, dict):
        raise ConfigError("sweep", "expected an object.")
    options: Dict[str, Any] = {}
    for key in data:
        if key not in ("kappa1", "alpha", "kappa2_ratio"):
            raise ConfigError(f"sweep.{key}", "unknown sweep setting.")
    for axis in ("kappa1", "alpha"):
        if axis in data:
            options[axis] = _axis_from_dict(axis, data[axis])
    if "kappa2_ratio" in data:
        options["kappa2_ratio"] = _number(
            "sweep.kappa2_ratio", data["kappa2_ratio"]
        )
    return SweepGrid(**options)


def with_scaled_rates(
    params: PhysicalParams, kappa1: float, kappa2: float, alpha: float
) -> PhysicalParams:
    """params with the dipolar rates and commonness replaced."""
    base = params.scaled_rates or ScaledRates()
    return replace(
        params,
        alpha=alpha,
        scaled_rates=replace(base, kappa1=kappa1, kappa2=kappa2),
    )


def crossing_time(
    times: np.ndarray, values: np.ndarray, level: float, start: int = 0
) -> Optional[float]:
    """First time at or after times[start] where values fall below level,
    linearly interpolated between samples. None if they never do."""
    times, values = np.asarray(times), np.asarray(values)
    for i in range(start, len(values) - 1):
        if values[i] >= level > values[i + 1]:
            fraction = (values[i] - level) / (values[i] - values[i + 1])
            return float(times[i] + fraction * (times[i + 1] - times[i]))
    return None


def refine_maximum(
    trajectory: Trajectory, concurrence: np.ndarray
) -> Tuple[float, float]:
    """Time and value of the concurrence maximum.

    The sampled maximum is refined on the integrator's interpolant between
    the neighbouring samples (in log time when the samples allow it).
    """
    index = int(np.argmax(concurrence))
    best = (float(trajectory.times[index]), float(concurrence[index]))
    if trajectory.dense is None or concurrence[index] <= 0:
        return best
    lower = trajectory.times[max(index - 1, 0)]
    upper = trajectory.times[min(index + 1, len(trajectory) - 1)]
    if upper <= lower:
        return best
    logarithmic = lower > 0

    def to_time(u):
        return np.exp(u) if logarithmic else u

    def negative_concurrence(u):
        state = trajectory.dense(np.array([to_time(u)]))[0]
        return -concurrence_guard(ObservableVector.from_array(state)).value

    bounds = (np.log(lower), np.log(upper)) if logarithmic else (lower, upper)
    result = minimize_scalar(
        negative_concurrence,
        bounds=bounds,
        method="bounded",
        options={"xatol": 1e-10},
    )
    if result.success and -result.fun > best[1]:
        return float(to_time(result.x)), float(-result.fun)
    return best


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    trajectory: Trajectory
    steady_state: SteadyState
    time_of_max: float
    max_concurrence: float
    decay_time: Optional[float]
    files: List[Path] = field(default_factory=list)

    @property
    def concurrence(self) -> np.ndarray:
        return self.trajectory.concurrence

    def metadata(self) -> Dict[str, Any]:
        return {
            "version": __version__,
            "config": self.config.to_dict(),
            "integration": self.trajectory.meta,
            "max_concurrence": self.max_concurrence,
            "time_of_max": self.time_of_max,
            "decay_time": self.decay_time,
            "steady_state": self.steady_state.to_dict(),
        }


def simulate(cfg: ScenarioConfig) -> ScenarioResult:
    """Integrates one scenario and evaluates its concurrence, in memory."""
    params = cfg.params
    rates = compute_rates(params)
    init = cfg.initial_vector()
    discrepancies = None
    if cfg.representation == "block":
        system, discrepancies = resolve_block_system(params, rates)
    else:
        system = assemble_liouvillian(params, rates)
    trajectory = integrate(
        system, init, cfg.t_end, tol=cfg.tolerance, times=cfg.times()
    )
    if discrepancies is not None:
        trajectory.meta["closed_form_discrepancies"] = len(discrepancies)
    trajectory.concurrence = concurrence_series(trajectory.states)

    time_of_max, max_concurrence = refine_maximum(
        trajectory, trajectory.concurrence
    )
    decay_time = None
    if max_concurrence > 0:
        decay_time = crossing_time(
            trajectory.times,
            trajectory.concurrence,
            max_concurrence / np.e,
            start=int(np.argmax(trajectory.concurrence)),
        )
    return ScenarioResult(
        config=cfg,
        trajectory=trajectory,
        steady_state=steady_state(params, rates, init),
        time_of_max=time_of_max,
        max_concurrence=max_concurrence,
        decay_time=decay_time,
    )


def run_scenario(
    cfg: ScenarioConfig, output_directory: Optional[Path] = None
) -> ScenarioResult:
    """Simulates a scenario and writes its CSV and metadata JSON."""
    result = simulate(cfg)
    directory = Path(output_directory or cfg.output_directory)
    name = cfg.output_name
    result.files.append(
        write_trajectory_csv(directory / f"{name}.csv", result.trajectory)
    )
    result.files.append(
        write_json(directory / f"{name}.meta.json", result.metadata())
    )
    return result
