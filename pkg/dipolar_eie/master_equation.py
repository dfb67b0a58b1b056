"""The purpose of this file is to assemble the Liouville-space generator of
the qubit pair: the coherent part (secular dipolar term, environment Lamb
shift and dipolar second-order shift) plus the environment dissipator D
and the dipolar dissipator Q.

Density matrices are vectorised by column stacking, so that
vec(A X B) = (B^T kron A) vec(X). Both dissipators are written as
Kossakowski sums  sum_ij g_ij (2 L_i rho L_j^dag - {L_j^dag L_i, rho})
with positive semidefinite coefficient matrices g.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import expm

from dipolar_eie.data_models.physical_params import PhysicalParams, RateSet
from dipolar_eie.spin_algebra import (
    ORDERS,
    build_t2,
    dipolar_coefficients,
    exchange_operator,
    pauli,
)

logger = logging.getLogger(__name__)

DIMENSION = 4


@dataclass(frozen=True)
class Superoperator:
    """A 16x16 complex matrix acting on column-stacked density matrices.

    rate_unit is the rate that time is scaled by (J for an assembled
    generator), so matrix / rate_unit generates evolution in scaled time.
    """

    matrix: np.ndarray
    rate_unit: float = 1.0

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.shape != (DIMENSION**2, DIMENSION**2):
            raise ValueError(
                f"A superoperator must be 16x16, got {matrix.shape}."
            )
        object.__setattr__(self, "matrix", matrix)

    def __add__(self, other: "Superoperator") -> "Superoperator":
        return Superoperator(self.matrix + other.matrix, self.rate_unit)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvectorize(self.matrix @ vectorize(rho))

    def scaled(self) -> np.ndarray:
        """The generator of evolution in units of 1/rate_unit."""
        return self.matrix / self.rate_unit


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvectorize(vector: np.ndarray) -> np.ndarray:
    return np.asarray(vector, dtype=complex).reshape(
        (DIMENSION, DIMENSION), order="F"
    )


def left_multiplication(operator: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> operator @ rho."""
    return np.kron(np.eye(DIMENSION), operator)


def right_multiplication(operator: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> rho @ operator."""
    return np.kron(operator.T, np.eye(DIMENSION))


def commutator_superoperator(operator: np.ndarray) -> np.ndarray:
    return left_multiplication(operator) - right_multiplication(operator)


def kossakowski_dissipator(
    jump_operators: Sequence[np.ndarray], coefficients: np.ndarray
) -> np.ndarray:
    """sum_ij g_ij (2 L_i rho L_j^dag - {L_j^dag L_i, rho})."""
    coefficients = np.asarray(coefficients)
    generator = np.zeros((DIMENSION**2, DIMENSION**2), dtype=complex)
    for i, left in enumerate(jump_operators):
        for j, right in enumerate(jump_operators):
            weight = coefficients[i, j]
            if weight == 0:
                continue
            product = right.conj().T @ left
            generator += weight * (
                2 * np.kron(right.conj(), left)
                - left_multiplication(product)
                - right_multiplication(product)
            )
    return generator


def compute_rates(p: PhysicalParams) -> RateSet:
    """Second-order dipolar rates.

    kappa_m = |omega_{d,m}|^2 tau_c / (1 + (m omega0 tau_c)^2),
    delta_kappa_m = kappa_m m omega0 tau_c and omega_{d,0} = Y2_0 omega_d.
    Scaled rates, when present on p, take precedence and are multiplied
    by J.
    """
    if p.tau_c <= 0:
        raise ValueError(f"tau_c must be strictly positive, got {p.tau_c}.")
    if p.scaled_rates is not None:
        scaled = p.scaled_rates
        return RateSet(
            kappa={
                0: scaled.kappa0 * p.J,
                1: scaled.kappa1 * p.J,
                2: scaled.kappa2 * p.J,
            },
            delta_kappa={
                1: scaled.delta_kappa1 * p.J,
                2: scaled.delta_kappa2 * p.J,
            },
            omega_d0=scaled.omega_d0 * p.J,
        )

    coefficients = dipolar_coefficients(p.omega_d, p.ang)
    kappa, delta_kappa = {}, {}
    for m in (0, 1, 2):
        lorentzian = 1 + (m * p.omega0 * p.tau_c) ** 2
        kappa[m] = abs(coefficients[m]) ** 2 * p.tau_c / lorentzian
        if m:
            delta_kappa[m] = kappa[m] * m * p.omega0 * p.tau_c
    return RateSet(
        kappa=kappa,
        delta_kappa=delta_kappa,
        omega_d0=float(coefficients[0].real),
    )


def lamb_shift_hamiltonian(p: PhysicalParams) -> np.ndarray:
    """Environment Lamb shift.

    Single-qubit terms shift each qubit by delta_omega sigma_z; alpha
    only enters through the flip-flop cross terms.
    """
    hamiltonian = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for i in (1, 2):
        for j in (1, 2):
            weight = 1.0 if i == j else p.alpha
            hamiltonian -= (
                weight
                * p.delta_omega
                * (
                    (1 + p.M0) * pauli("-", i) @ pauli("+", j)
                    - (1 - p.M0) * pauli("+", i) @ pauli("-", j)
                )
            )
    return hamiltonian


def dipolar_shift_hamiltonian(r: RateSet) -> np.ndarray:
    """-sum_{m != 0} delta_kappa_m T2_m T2_{-m}."""
    hamiltonian = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for m in ORDERS:
        if m == 0:
            continue
        hamiltonian -= r.delta_kappa_of(m) * build_t2(m) @ build_t2(-m)
    return hamiltonian


def build_coherent_part(p: PhysicalParams, r: RateSet) -> np.ndarray:
    """H_coh = omega_{d,0} T2_0 + H_Lamb + H_dds (a Hermitian operator)."""
    return (
        r.omega_d0 * build_t2(0)
        + lamb_shift_hamiltonian(p)
        + dipolar_shift_hamiltonian(r)
    )


def build_dissipator_D(p: PhysicalParams) -> Superoperator:
    """Dissipator of the (partially) common environment.

    The (1 + M0) channel drives each spin up, the (1 - M0) channel drives
    it down. Within each channel the coefficient matrix is
    J/2 [[1, alpha], [alpha, 1]].
    """
    correlation = 0.5 * p.J * np.array([[1.0, p.alpha], [p.alpha, 1.0]])
    raising = [pauli("+", 1), pauli("+", 2)]
    lowering = [pauli("-", 1), pauli("-", 2)]
    generator = kossakowski_dissipator(
        raising, (1 + p.M0) * correlation
    ) + kossakowski_dissipator(lowering, (1 - p.M0) * correlation)
    return Superoperator(generator, rate_unit=p.J)


def build_dissipator_Q(r: RateSet, rate_unit: float = 1.0) -> Superoperator:
    """Dipolar dissipator, secular pairs only.

    Each order m contributes kappa_m (2 L rho L^dag - {L^dag L, rho})
    with jump operator L = T2_{-m}.
    """
    generator = np.zeros((DIMENSION**2, DIMENSION**2), dtype=complex)
    for m in ORDERS:
        rate = r.kappa_of(m)
        if rate == 0:
            continue
        generator += kossakowski_dissipator([build_t2(-m)], [[rate]])
    return Superoperator(generator, rate_unit=rate_unit)


def assemble_liouvillian(
    p: PhysicalParams, r: Optional[RateSet] = None
) -> Superoperator:
    """The full generator -i[H_coh, .] + D + Q, with rate_unit J."""
    if r is None:
        r = compute_rates(p)
    hamiltonian = build_coherent_part(p, r)
    generator = (
        -1j * commutator_superoperator(hamiltonian)
        + build_dissipator_D(p).matrix
        + build_dissipator_Q(r).matrix
    )
    logger.debug(
        "Assembled Liouvillian for J=%g alpha=%g M0=%g, scaled rates %s",
        p.J,
        p.alpha,
        p.M0,
        r.scaled(p.J),
    )
    return Superoperator(generator, rate_unit=p.J)


def trace_functional() -> np.ndarray:
    """Row vector w with w @ vec(rho) = Tr(rho)."""
    return vectorize(np.eye(DIMENSION)).conj()


def propagator(gen: Superoperator, t: float, scaled: bool = True):
    """exp(L t); t is in units of 1/rate_unit unless scaled is False."""
    matrix = gen.scaled() if scaled else gen.matrix
    return expm(matrix * t)


def choi_matrix(superop: np.ndarray) -> np.ndarray:
    """Choi matrix sum_ij |i><j| kron S(|i><j|) of a linear map S.

    The map is completely positive if and only if this is positive
    semidefinite.
    """
    superop = np.asarray(superop)
    choi = np.zeros((DIMENSION**2, DIMENSION**2), dtype=complex)
    for i in range(DIMENSION):
        for j in range(DIMENSION):
            unit = np.zeros((DIMENSION, DIMENSION), dtype=complex)
            unit[i, j] = 1.0
            image = unvectorize(superop @ vectorize(unit))
            choi += np.kron(unit, image)
    return choi


def conserved_superoperator() -> np.ndarray:
    """[sigma1 . sigma2, .] as a superoperator.

    For a fully common environment this commutes with the whole generator,
    which makes <sigma1 . sigma2> = 4 (Mc + Mzz) a constant of motion.
    """
    return commutator_superoperator(exchange_operator())
