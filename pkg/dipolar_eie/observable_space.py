"""The purpose of this file is to map between density matrices and the 15
observables of a qubit pair, and to provide the equations of motion of
those observables as five decoupled linear blocks

    dA/dt = L A + B.

Two constructions of the blocks exist. build_block_system writes down the
closed-form block matrices. derive_block_system projects an assembled
Liouvillian onto the observables. reconcile_block_systems compares them
entry by entry. resolve_block_system runs that comparison and returns the
projection, which is what the time evolution integrates.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from dipolar_eie.data_models.observable_vector import (
    BLOCK_INDICES,
    BLOCK_NAMES,
    OBSERVABLE_NAMES,
    ObservableVector,
)
from dipolar_eie.data_models.physical_params import PhysicalParams, RateSet
from dipolar_eie.exceptions import InvalidStateError
from dipolar_eie.master_equation import (
    Superoperator,
    assemble_liouvillian,
    unvectorize,
    vectorize,
)
from dipolar_eie.spin_algebra import identity, pauli

logger = logging.getLogger(__name__)

TRACE_TOLERANCE = 1e-10


def _one_spin(axis: str, sign: int) -> np.ndarray:
    return 0.5 * (pauli(axis, 1) + sign * pauli(axis, 2))


def _two_spin(first: str, second: str, sign: int) -> np.ndarray:
    return 0.25 * (
        pauli(first, 1) @ pauli(second, 2)
        + sign * pauli(second, 1) @ pauli(first, 2)
    )


@lru_cache(maxsize=None)
def _operator_table() -> Tuple[np.ndarray, ...]:
    xx = pauli("x", 1) @ pauli("x", 2)
    yy = pauli("y", 1) @ pauli("y", 2)
    table = {
        "Mz": _one_spin("z", +1),
        "Mzz": 0.25 * pauli("z", 1) @ pauli("z", 2),
        "Mc": 0.25 * (xx + yy),
        "Mx": _one_spin("x", +1),
        "My": _one_spin("y", +1),
        "Mxy": _two_spin("x", "y", +1),
        "Mxz": _two_spin("x", "z", +1),
        "Myz": _two_spin("y", "z", +1),
        "Ax": _one_spin("x", -1),
        "Ay": _one_spin("y", -1),
        "Az": _one_spin("z", -1),
        "Axy": _two_spin("x", "y", -1),
        "Axz": _two_spin("x", "z", -1),
        "Ayz": _two_spin("y", "z", -1),
        "Ac": 0.25 * (xx - yy),
    }
    return tuple(table[name] for name in OBSERVABLE_NAMES)


def observable_operators() -> Dict[str, np.ndarray]:
    """Hermitian operators O_k with observable k equal to Tr(O_k rho)."""
    return {
        name: operator.copy()
        for name, operator in zip(OBSERVABLE_NAMES, _operator_table())
    }


@lru_cache(maxsize=None)
def _dual_table() -> Tuple[np.ndarray, ...]:
    # Dual basis D_k with Tr(O_j D_k) = delta_jk, from the Gram matrix.
    operators = _operator_table()
    gram = np.array(
        [[np.trace(a @ b).real for b in operators] for a in operators]
    )
    inverse = np.linalg.inv(gram)
    return tuple(
        sum(inverse[l, k] * operators[l] for l in range(len(operators)))
        for k in range(len(operators))
    )


def check_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Checks shape, Hermiticity and unit trace; returns rho as an array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"Expected a 4x4 matrix, got {rho.shape}.")
    if np.max(np.abs(rho - rho.conj().T)) > TRACE_TOLERANCE:
        raise InvalidStateError("Density matrix is not Hermitian.")
    trace = np.trace(rho).real
    if abs(trace - 1) > TRACE_TOLERANCE:
        raise InvalidStateError(f"Density matrix has trace {trace}, not 1.")
    return rho


def expectation_matrix() -> np.ndarray:
    """15x16 complex matrix W with W @ vec(rho) = Tr(O_k rho) for all k."""
    return np.array([vectorize(o.T) for o in _operator_table()])


def rho_to_observables(rho: np.ndarray) -> ObservableVector:
    rho = check_density_matrix(rho)
    return ObservableVector.from_array(
        (expectation_matrix() @ vectorize(rho)).real
    )


def observables_to_rho(v: ObservableVector) -> np.ndarray:
    """Identity/4 plus the unique traceless Hermitian completion.

    Positivity is not enforced, see min_eigenvalue.
    """
    rho = identity() / 4
    for value, dual in zip(v.to_array(), _dual_table()):
        rho = rho + value * dual
    return rho


def min_eigenvalue(v: ObservableVector) -> float:
    """Smallest eigenvalue of the reconstructed density matrix."""
    return float(np.linalg.eigvalsh(observables_to_rho(v)).min())


@dataclass(frozen=True)
class BlockSystem:
    """Block-diagonal linear equations for the 15 observables.

    blocks[k] is the matrix of block k over BLOCK_NAMES[k] and
    inhomogeneities[k] its constant term (non-zero only for block 1).
    Entries are rates in physical units, rate_unit is J.
    """

    blocks: Dict[int, np.ndarray]
    inhomogeneities: Dict[int, np.ndarray] = field(default_factory=dict)
    rate_unit: float = 1.0

    def __post_init__(self):
        if sorted(self.blocks) != sorted(BLOCK_NAMES):
            raise ValueError("A block system needs exactly blocks 1 to 5.")
        blocks, inhomogeneities = {}, {}
        for index, names in BLOCK_NAMES.items():
            size = len(names)
            blocks[index] = np.asarray(self.blocks[index], dtype=float)
            if blocks[index].shape != (size, size):
                raise ValueError(
                    f"Block {index} must be {size}x{size},"
                    f" got {blocks[index].shape}."
                )
            inhomogeneities[index] = np.asarray(
                self.inhomogeneities.get(index, np.zeros(size)), dtype=float
            )
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "inhomogeneities", inhomogeneities)

    @property
    def L1(self) -> np.ndarray:
        return self.blocks[1]

    @property
    def B1(self) -> np.ndarray:
        return self.inhomogeneities[1]

    def matrix(self) -> np.ndarray:
        """The 15x15 matrix in ObservableVector order."""
        full = np.zeros((len(OBSERVABLE_NAMES), len(OBSERVABLE_NAMES)))
        for index, block in self.blocks.items():
            rows = list(BLOCK_INDICES[index])
            full[np.ix_(rows, rows)] = block
        return full

    def inhomogeneity(self) -> np.ndarray:
        full = np.zeros(len(OBSERVABLE_NAMES))
        for index, vector in self.inhomogeneities.items():
            full[list(BLOCK_INDICES[index])] = vector
        return full

    def scaled(self) -> "BlockSystem":
        """The same equations with time measured in units of 1/rate_unit."""
        return BlockSystem(
            blocks={k: b / self.rate_unit for k, b in self.blocks.items()},
            inhomogeneities={
                k: b / self.rate_unit for k, b in self.inhomogeneities.items()
            },
            rate_unit=1.0,
        )

    def derivative(self, v: ObservableVector) -> np.ndarray:
        return self.matrix() @ v.to_array() + self.inhomogeneity()


def build_block_system(p: PhysicalParams, r: RateSet) -> BlockSystem:
    """Closed-form block matrices in physical units."""
    J, M0, alpha, dw = p.J, p.M0, p.alpha, p.delta_omega
    k0, k1, k2 = r.kappa[0], r.kappa[1], r.kappa[2]
    dk1, dk2 = r.delta_kappa[1], r.delta_kappa[2]
    wd0 = r.omega_d0

    L1 = np.array(
        [
            [-2 * J - k1 - 4 * k2, 0.0, 4 * M0 * alpha * J],
            [M0 * J, -4 * J - 2 * k1, 2 * alpha * J + k1],
            [-M0 * alpha * J, 4 * alpha * J + 2 * k1, -2 * J - k1],
        ]
    )
    B1 = np.array([2 * M0 * J, 0.0, 0.0])

    shift = -dk1 / 2 - dk2 + dw
    diag = -(2.5 * k1 + k2 + 9 * k0 + J)
    diag_zz = -(0.5 * k1 + k2 + 9 * k0 + 3 * J + 2 * J * alpha)
    coupling = 2 * M0 * alpha * dw + 6 * wd0
    feed = M0 * J + M0 * J * alpha / 2
    twist = M0 * alpha * dw / 2 + 1.5 * wd0
    L2 = np.array(
        [
            [diag, shift, -2 * M0 * J * alpha, coupling],
            [-shift, diag, -coupling, -2 * M0 * J * alpha],
            [feed, twist, diag_zz, shift],
            [-twist, feed, -shift, diag_zz],
        ]
    )

    decay = -(k1 + 2 * k2 + 2 * J)
    rotation = dk1 + 2 * dk2 - 2 * dw
    L3 = np.array([[decay, rotation], [-rotation, decay]])

    decay = -(k1 + 4 * k0 + 2 * J)
    rotation = M0 * alpha * dw + wd0
    L4 = np.array([[decay, rotation], [-4 * rotation, decay]])

    diag = -(0.5 * k1 + k2 + k0 + J)
    diag_zz = -(0.5 * k1 + k2 + k0 + 3 * J - 2 * J * alpha)
    coupling = -2 * M0 * alpha * dw + 2 * wd0
    feed = M0 * J - M0 * J * alpha / 2
    twist = -M0 * alpha * dw / 2 + 0.5 * wd0
    L5 = np.array(
        [
            [diag, shift, 2 * M0 * J * alpha, coupling],
            [-shift, diag, -coupling, 2 * M0 * J * alpha],
            [feed, twist, diag_zz, shift],
            [-twist, feed, -shift, diag_zz],
        ]
    )

    return BlockSystem(
        blocks={1: L1, 2: L2, 3: L3, 4: L4, 5: L5},
        inhomogeneities={1: B1},
        rate_unit=J,
    )


def project_generator(gen: Superoperator) -> Tuple[np.ndarray, np.ndarray]:
    """Exact 15x15 matrix A and offset b with dv/dt = A v + b under gen."""
    operators, duals = _operator_table(), _dual_table()

    def expectation_rates(rho: np.ndarray) -> np.ndarray:
        image = unvectorize(gen.matrix @ vectorize(rho))
        return np.array([np.trace(o @ image) for o in operators])

    offset = expectation_rates(identity() / 4)
    columns = [expectation_rates(dual) for dual in duals]
    full = np.column_stack(columns)
    imaginary = max(np.abs(full.imag).max(), np.abs(offset.imag).max())
    if imaginary > 1e-9 * max(1.0, np.abs(full).max()):
        logger.warning(
            "Generator does not preserve Hermiticity: imaginary part %.3e"
            " in the observable projection.",
            imaginary,
        )
    return full.real, offset.real


def derive_block_system(gen: Superoperator) -> Tuple[BlockSystem, float]:
    """Block system obtained by projecting a Liouvillian.

    Also returns the largest coupling that falls outside the five blocks
    (zero up to roundoff for a generator of this model).
    """
    full, offset = project_generator(gen)
    mask = np.ones_like(full, dtype=bool)
    blocks = {}
    for index, rows in BLOCK_INDICES.items():
        rows = list(rows)
        blocks[index] = full[np.ix_(rows, rows)]
        mask[np.ix_(rows, rows)] = False
    off_block = offset.copy()
    off_block[list(BLOCK_INDICES[1])] = 0.0
    residual = float(
        max(np.abs(full[mask]).max(initial=0.0), np.abs(off_block).max())
    )
    system = BlockSystem(
        blocks=blocks,
        inhomogeneities={1: offset[list(BLOCK_INDICES[1])]},
        rate_unit=gen.rate_unit,
    )
    return system, residual


@dataclass(frozen=True)
class Discrepancy:
    """One entry where two block systems disagree.

    column is None for an entry of the inhomogeneity.
    """

    block: int
    row: str
    column: Optional[str]
    printed: float
    derived: float


def reconcile_block_systems(
    printed: BlockSystem, derived: BlockSystem, tol: float = 1e-9
) -> List[Discrepancy]:
    """Lists and logs every entry where the systems differ beyond tol.

    tol is relative to the largest entry of the derived system (or 1).
    """
    scale = max(1.0, np.abs(derived.matrix()).max())
    discrepancies = []
    for index, names in BLOCK_NAMES.items():
        a, b = printed.blocks[index], derived.blocks[index]
        for i, row in enumerate(names):
            for j, column in enumerate(names):
                if abs(a[i, j] - b[i, j]) > tol * scale:
                    discrepancies.append(
                        Discrepancy(index, row, column, a[i, j], b[i, j])
                    )
            offset_a = printed.inhomogeneities[index][i]
            offset_b = derived.inhomogeneities[index][i]
            if abs(offset_a - offset_b) > tol * scale:
                discrepancies.append(
                    Discrepancy(index, row, None, offset_a, offset_b)
                )
    for entry in discrepancies:
        logger.warning(
            "Block %d entry (%s, %s): closed form %.6g, Liouvillian %.6g",
            entry.block,
            entry.row,
            entry.column or "B",
            entry.printed,
            entry.derived,
        )
    return discrepancies


def resolve_block_system(
    p: PhysicalParams, r: RateSet, tol: float = 1e-9
) -> Tuple[BlockSystem, List[Discrepancy]]:
    """Block equations to integrate for p.

    The Liouvillian projection is returned. Every closed-form entry that
    disagrees with it is logged (see reconcile_block_systems) and listed.
    """
    derived, residual = derive_block_system(assemble_liouvillian(p, r))
    scale = max(1.0, np.abs(derived.matrix()).max())
    if residual > tol * scale:
        logger.warning(
            "Liouvillian couples observables of different blocks"
            " (largest coupling %.3e); the block equations drop it.",
            residual,
        )
    discrepancies = reconcile_block_systems(
        build_block_system(p, r), derived, tol
    )
    if discrepancies:
        logger.warning(
            "%d closed-form block entries differ from the Liouvillian;"
            " integrating the Liouvillian projection.",
            len(discrepancies),
        )
    return derived, discrepancies
