"""The purpose of this file is to compute the concurrence of a qubit pair,
both from a density matrix and from the closed form that holds when only
Mz, Mzz and Mc are non-zero, and to cross-check the two.
"""

import logging

import numpy as np

from dipolar_eie.data_models.observable_vector import ObservableVector
from dipolar_eie.data_models.results import ConcurrenceResult
from dipolar_eie.exceptions import (
    ConsistencyError,
    InvalidRegionError,
    InvalidStateError,
)
from dipolar_eie.observable_space import (
    check_density_matrix,
    observables_to_rho,
)
from dipolar_eie.spin_algebra import pauli

logger = logging.getLogger(__name__)

NEGATIVITY_TOLERANCE = 1e-9
CLOSED_FORM_GATE = 1e-9

_SIGMA_YY = pauli("y", 1) @ pauli("y", 2)


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """rho~ = (sigma_y kron sigma_y) rho* (sigma_y kron sigma_y)."""
    return _SIGMA_YY @ np.conj(rho) @ _SIGMA_YY


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(rho)
    values = np.clip(values, 0.0, None)
    return (vectors * np.sqrt(values)) @ vectors.conj().T


def _validated(rho: np.ndarray) -> np.ndarray:
    rho = check_density_matrix(rho)
    rho = 0.5 * (rho + rho.conj().T)
    lowest = np.linalg.eigvalsh(rho).min()
    if lowest < -NEGATIVITY_TOLERANCE:
        raise InvalidStateError(
            f"Density matrix has a negative eigenvalue {lowest:.3e}."
        )
    return rho


def _from_lambdas(lambdas: np.ndarray, route: str) -> ConcurrenceResult:
    lambdas = np.sort(lambdas)[::-1]
    value = lambdas[0] - lambdas[1:].sum()
    return ConcurrenceResult(
        value=float(np.clip(value, 0.0, 1.0)),
        route=route,
        lambdas=tuple(float(x) for x in lambdas),
    )


def concurrence_wootters(rho: np.ndarray) -> ConcurrenceResult:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the square roots of the eigenvalues of rho rho~. They are
    obtained as the singular values of sqrt(rho) sqrt(rho~), which equal
    them exactly and are free of the square-root loss of precision near
    zero eigenvalues.
    """
    rho = _validated(rho)
    product_spectrum = np.linalg.eigvals(rho @ spin_flip(rho))
    if product_spectrum.real.min() < -NEGATIVITY_TOLERANCE:
        raise InvalidStateError(
            "rho rho~ has a negative eigenvalue"
            f" {product_spectrum.real.min():.3e}."
        )
    root = _psd_sqrt(rho)
    lambdas = np.linalg.svd(root @ spin_flip(root), compute_uv=False)
    return _from_lambdas(lambdas, "wootters")


def concurrence_hermitian(rho: np.ndarray) -> ConcurrenceResult:
    """Concurrence from the eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho))."""
    rho = _validated(rho)
    root = _psd_sqrt(rho)
    spectrum = np.linalg.eigvalsh(root @ spin_flip(rho) @ root)
    lambdas = np.sqrt(np.clip(spectrum, 0.0, None))
    return _from_lambdas(lambdas, "hermitian")


def concurrence_closed_form(
    Mz: float, Mzz: float, Mc: float
) -> ConcurrenceResult:
    """max(0, 2|Mc| - sqrt((1 + 4 Mzz)^2 - 4 Mz^2) / 2).

    Valid for states whose only non-zero observables are Mz, Mzz and Mc.
    """
    argument = (1 + 4 * Mzz) ** 2 - 4 * Mz**2
    if argument < 0:
        if argument < -1e-12:
            raise InvalidRegionError(
                f"(Mz, Mzz, Mc) = ({Mz}, {Mzz}, {Mc}) gives a negative"
                f" square-root argument {argument:.3e}."
            )
        argument = 0.0
    value = 2 * abs(Mc) - 0.5 * np.sqrt(argument)
    if value > 1 + 1e-10:
        raise InvalidRegionError(
            f"(Mz, Mzz, Mc) = ({Mz}, {Mzz}, {Mc}) is not a physical state."
        )

    # Spectrum of rho rho~ for this X-shaped state.
    flip = abs(0.25 * (1 - 4 * Mzz))
    coherence = abs(Mc)
    outer = 0.25 * np.sqrt(argument)
    lambdas = np.array(
        [coherence + flip, abs(flip - coherence), outer, outer]
    )
    return ConcurrenceResult(
        value=float(np.clip(value, 0.0, 1.0)),
        route="closed_form",
        lambdas=tuple(float(x) for x in np.sort(lambdas)[::-1]),
    )


def concurrence_guard(
    v: ObservableVector, tolerance: float = CLOSED_FORM_GATE
) -> ConcurrenceResult:
    """Wootters concurrence of the state, cross-checked against the closed
    form whenever every observable outside block 1 vanishes.
    """
    result = concurrence_wootters(observables_to_rho(v))
    if max(abs(x) for x in v.off_block_one()) >= CLOSED_FORM_GATE:
        return result
    closed = concurrence_closed_form(v.Mz, v.Mzz, v.Mc)
    if abs(closed.value - result.value) > tolerance:
        raise ConsistencyError(
            f"Concurrence routes disagree for {v}: Wootters {result.value},"
            f" closed form {closed.value}."
        )
    return result


def concurrence_series(states: np.ndarray) -> np.ndarray:
    """Guarded concurrence of every row of an observable array."""
    return np.array(
        [
            concurrence_guard(ObservableVector.from_array(row)).value
            for row in np.atleast_2d(states)
        ]
    )
