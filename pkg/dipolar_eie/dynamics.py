"""The purpose of this file is to evolve the qubit pair in time, either
through the block equations of the observables or through the full
Liouvillian, and to compute steady states.

Times are in units of 1/J unless a function is asked for physical time.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import null_space

from dipolar_eie.data_models.observable_vector import ObservableVector
from dipolar_eie.data_models.physical_params import PhysicalParams, RateSet
from dipolar_eie.data_models.results import SteadyState, Trajectory
from dipolar_eie.exceptions import IntegrationError
from dipolar_eie.master_equation import (
    Superoperator,
    compute_rates,
    vectorize,
)
from dipolar_eie.observable_space import (
    BlockSystem,
    build_block_system,
    check_density_matrix,
    expectation_matrix,
    min_eigenvalue,
    observables_to_rho,
    rho_to_observables,
)

logger = logging.getLogger(__name__)

STIFFNESS_RATIO = 1e3
EXPLICIT_SPAN = 1e5
NEAR_SINGULAR_ALPHA = 1e-12


def sample_times(
    t_end: float,
    count: int = 200,
    spacing: str = "log",
    t_min: float = 1e-3,
) -> np.ndarray:
    """t = 0 followed by count - 1 log-spaced (or count evenly spaced)
    samples up to t_end."""
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}.")
    if count < 2:
        raise ValueError(f"At least two samples are needed, got {count}.")
    if spacing == "linear":
        return np.linspace(0.0, t_end, count)
    if spacing != "log":
        raise ValueError(f"Unknown sample spacing {spacing!r}.")
    if not 0 < t_min < t_end:
        raise ValueError(
            f"t_min must lie in (0, t_end) for log spacing, got {t_min}."
        )
    return np.concatenate(([0.0], np.geomspace(t_min, t_end, count - 1)))


@dataclass
class _LinearSystem:
    """dy/dt = matrix y + offset, with observables = readout y."""

    matrix: np.ndarray
    offset: np.ndarray
    readout: np.ndarray
    y0: np.ndarray
    representation: str


def _block_system_problem(
    system: BlockSystem, init, scaled: bool
) -> _LinearSystem:
    if scaled:
        system = system.scaled()
    if not isinstance(init, ObservableVector):
        init = rho_to_observables(init)
    size = len(init.to_array())
    return _LinearSystem(
        matrix=system.matrix(),
        offset=system.inhomogeneity(),
        readout=np.eye(size),
        y0=init.to_array(),
        representation="block",
    )


def _liouvillian_problem(
    gen: Superoperator, init, scaled: bool
) -> _LinearSystem:
    # Complex 16-dim system as a real 32-dim one: y = [Re vec, Im vec].
    generator = gen.scaled() if scaled else gen.matrix
    matrix = np.block(
        [
            [generator.real, -generator.imag],
            [generator.imag, generator.real],
        ]
    )
    if isinstance(init, ObservableVector):
        init = observables_to_rho(init)
    vec = vectorize(check_density_matrix(init))
    weights = expectation_matrix()
    return _LinearSystem(
        matrix=matrix,
        offset=np.zeros(len(matrix)),
        readout=np.hstack([weights.real, -weights.imag]),
        y0=np.concatenate([vec.real, vec.imag]),
        representation="liouvillian",
    )


def _stiffness(matrix: np.ndarray, t_end: float) -> Tuple[float, float]:
    """Ratio of the fastest to the slowest non-zero decay rate, and the
    fastest rate times t_end (explicit steps scale with the latter)."""
    decay = np.abs(np.linalg.eigvals(matrix).real)
    fastest = decay.max(initial=0.0)
    if fastest == 0.0:
        return 1.0, 0.0
    slowest = decay[decay > 1e-9 * fastest].min()
    return float(fastest / slowest), float(fastest * t_end)


def _solve(problem: _LinearSystem, times: np.ndarray, tol: float, method):
    def rhs(t, y):
        return problem.matrix @ y + problem.offset

    def jacobian(t, y):
        return problem.matrix

    options = {"jac": jacobian} if method != "DOP853" else {}
    return solve_ivp(
        rhs,
        (times[0], times[-1]),
        problem.y0,
        method=method,
        t_eval=times,
        dense_output=True,
        rtol=tol,
        atol=tol * 1e-2,
        **options,
    )


def integrate(
    system: Union[BlockSystem, Superoperator],
    init: Union[ObservableVector, np.ndarray],
    t_end: float,
    tol: float = 1e-10,
    times: Optional[Sequence[float]] = None,
    scaled: bool = True,
) -> Trajectory:
    """Integrates the observables (block system) or the density matrix
    (Liouvillian) from init, sampled at times (default: sample_times).

    DOP853 is used unless the generator is stiff, or DOP853 fails, in
    which case Radau with the exact Jacobian takes over. Stiff means the
    ratio of fastest to slowest non-zero decay rate exceeds
    STIFFNESS_RATIO, or the explicit step count (fastest rate times
    t_end) would exceed EXPLICIT_SPAN.
    """
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}.")
    if not 1e-14 < tol < 1e-3:
        raise ValueError(f"tol must lie in (1e-14, 1e-3), got {tol}.")
    times = sample_times(t_end) if times is None else np.asarray(times)
    if times[0] != 0.0 or not np.isclose(times[-1], t_end):
        raise ValueError("Sample times must run from 0 to t_end.")

    if isinstance(system, BlockSystem):
        problem = _block_system_problem(system, init, scaled)
    elif isinstance(system, Superoperator):
        problem = _liouvillian_problem(system, init, scaled)
    else:
        raise TypeError(f"Cannot integrate a {type(system).__name__}.")

    ratio, span = _stiffness(problem.matrix, t_end)
    stiff = ratio > STIFFNESS_RATIO or span > EXPLICIT_SPAN
    method = "Radau" if stiff else "DOP853"
    logger.info(
        "Integrating %s system to t=%g with %s"
        " (stiffness ratio %.3g, fastest rate x t_end %.3g)",
        problem.representation,
        t_end,
        method,
        ratio,
        span,
    )
    solution = _solve(problem, times, tol, method)
    if not solution.success and method == "DOP853":
        logger.warning(
            "DOP853 failed at t=%g (%s), retrying with Radau.",
            solution.t[-1] if len(solution.t) else 0.0,
            solution.message,
        )
        method = "Radau"
        solution = _solve(problem, times, tol, method)
    if not solution.success:
        reached = float(solution.t[-1]) if len(solution.t) else 0.0
        raise IntegrationError(
            f"{method} integration failed: {solution.message}", time=reached
        )
    if not np.all(np.isfinite(solution.y)):
        bad = int(np.argmax(~np.all(np.isfinite(solution.y), axis=0)))
        raise IntegrationError(
            "Integration produced a non-finite state.",
            time=float(solution.t[bad]),
        )

    states = (problem.readout @ solution.y).T
    readout, interpolant = problem.readout, solution.sol
    trajectory = Trajectory(
        times=solution.t,
        states=states,
        meta={
            "representation": problem.representation,
            "method": method,
            "tolerance": tol,
            "stiffness_ratio": ratio,
            "time_unit": "1/J" if scaled else "physical",
        },
        dense=lambda t: (readout @ interpolant(np.asarray(t))).T,
    )
    trajectory.meta["min_eigenvalue"] = min(
        min_eigenvalue(trajectory.state_at(i)) for i in range(len(times))
    )
    return trajectory


def _scaled_block_one(p: PhysicalParams, r: RateSet):
    system = build_block_system(p, r).scaled()
    return system.L1, system.B1


def steady_state_closed_form(
    p: PhysicalParams,
    r: Optional[RateSet] = None,
    init: Optional[ObservableVector] = None,
) -> ObservableVector:
    """Closed-form block-1 steady state.

    For alpha < 1 it is unique. For alpha = 1 it depends on
    F = Mc + Mzz of the initial state (zero state if init is None).
    """
    r = compute_rates(p) if r is None else r
    k1, k2 = r.kappa[1] / p.J, r.kappa[2] / p.J
    M0, alpha = p.M0, p.alpha
    if alpha < 1:
        c1 = (1 + k1) * (2 + k1 + 4 * k2) + alpha * (
            2 + k1 + 4 * k2 - k1 * M0**2
        )
        return ObservableVector(
            Mz=2 * M0 * (1 + alpha + k1) / c1,
            Mzz=M0**2 * (2 + 2 * alpha + k1) / (4 * c1),
            Mc=M0**2 * k1 / (2 * c1),
        )
    F = 0.0 if init is None else init.dipolar_and_zero_quantum
    c2 = 4 * M0**2 + 3 * (2 + k1) * (2 + k1 + 4 * k2)
    Mc = (-2 * M0**2 + 2 * F * (2 + k1) * (2 + k1 + 4 * k2)) / c2
    return ObservableVector(
        Mz=2 * M0 * (3 + 4 * F) * (2 + k1) / c2,
        Mzz=F - Mc,
        Mc=Mc,
    )


def _check_agreement(first: np.ndarray, second: np.ndarray, label: str):
    scale = max(1.0, np.abs(first).max())
    difference = np.abs(first - second).max()
    if difference > 1e-9 * scale:
        logger.warning(
            "Steady state %s disagrees with the closed form by %.3e",
            label,
            difference,
        )


def steady_state(
    p: PhysicalParams,
    r: Optional[RateSet] = None,
    init: Optional[ObservableVector] = None,
) -> SteadyState:
    """Block-1 steady state from the block equations.

    alpha < 1: solves L1 v = -B1. alpha = 1: L1 is singular and the
    closed form on the manifold Mc + Mzz = F is returned instead.
    Either way the other route is computed and compared.
    """
    r = compute_rates(p) if r is None else r
    L1, B1 = _scaled_block_one(p, r)
    closed = steady_state_closed_form(p, r, init)
    closed_block = closed.block(1)

    if p.alpha == 1:
        F = closed.dipolar_and_zero_quantum
        constrained = np.vstack([L1, [0.0, 1.0, 1.0]])
        target = np.concatenate([-B1, [F]])
        projected = np.linalg.lstsq(constrained, target, rcond=None)[0]
        _check_agreement(closed_block, projected, "on the conserved manifold")
        return SteadyState(
            values=closed,
            mode="conserved_manifold",
            residual=float(np.linalg.norm(L1 @ closed_block + B1)),
            F=F,
        )

    if 1 - p.alpha < NEAR_SINGULAR_ALPHA:
        warnings.warn(
            f"alpha = {p.alpha} is within {NEAR_SINGULAR_ALPHA} of 1; the"
            " block-1 matrix is close to singular.",
            RuntimeWarning,
        )
    solved = np.linalg.solve(L1, -B1)
    _check_agreement(closed_block, solved, "from the linear solve")
    return SteadyState(
        values=ObservableVector(Mz=solved[0], Mzz=solved[1], Mc=solved[2]),
        mode="regular",
        residual=float(np.linalg.norm(L1 @ solved + B1)),
    )


@dataclass(frozen=True)
class SpectralAnalysis:
    """Eigenvalues sorted by decreasing real part and a null-space basis
    (columns are vectorised density-matrix directions)."""

    eigenvalues: np.ndarray
    null_space: np.ndarray

    @property
    def null_dimension(self) -> int:
        return self.null_space.shape[1]

    def slowest_decay_rate(self, tolerance: float = 1e-9) -> float:
        """Smallest |Re lambda| among the eigenvalues that are not zero."""
        decaying = np.abs(self.eigenvalues.real)
        decaying = decaying[np.abs(self.eigenvalues) > tolerance]
        return float(decaying.min())


def spectral_analysis(
    gen: Superoperator, rcond: float = 1e-10
) -> SpectralAnalysis:
    """Spectrum and null space of the scaled generator."""
    matrix = gen.scaled()
    try:
        eigenvalues = np.linalg.eigvals(matrix)
        kernel = null_space(matrix, rcond=rcond)
    except np.linalg.LinAlgError:
        logger.error("Eigen-decomposition of the generator failed.")
        raise
    order = np.lexsort((eigenvalues.imag, -eigenvalues.real))
    return SpectralAnalysis(eigenvalues=eigenvalues[order], null_space=kernel)
