"""Operator primitives for a pair of spin-1/2 qubits.

Everything acts on the 4-dimensional product space with basis order
|00>, |01>, |10>, |11>, where |0> is spin up (sigma_z = +1).
Pauli ladder operators are sigma_pm = (sigma_x +- i sigma_y) / 2, so
sigma_+ raises sigma_z.

The rank-2 spherical tensors are normalised to unit Hilbert-Schmidt norm,
Tr[T_m T_m^dagger] = 1 for every order m, with T_m^dagger = (-1)^m T_{-m}.
"""

from typing import Dict, Tuple

import numpy as np

from dipolar_eie.data_models.physical_params import AngularConfig

ORDERS = (-2, -1, 0, 1, 2)

_IDENTITY_2 = np.eye(2, dtype=complex)
_SINGLE_QUBIT = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "+": np.array([[0, 1], [0, 0]], dtype=complex),
    "-": np.array([[0, 0], [1, 0]], dtype=complex),
}


def pauli(axis: str, qubit: int) -> np.ndarray:
    """Embeds a single-qubit Pauli (or ladder) operator into the pair space.

    axis: one of "x", "y", "z", "+", "-"
    qubit: 1 or 2
    """
    if axis not in _SINGLE_QUBIT:
        raise ValueError(f"Unknown Pauli axis {axis!r}.")
    if qubit == 1:
        return np.kron(_SINGLE_QUBIT[axis], _IDENTITY_2)
    if qubit == 2:
        return np.kron(_IDENTITY_2, _SINGLE_QUBIT[axis])
    raise ValueError(f"Qubit index must be 1 or 2, got {qubit}.")


def identity() -> np.ndarray:
    return np.eye(4, dtype=complex)


def total_sigma_z() -> np.ndarray:
    """sigma_z^(1) + sigma_z^(2), the generator of the Zeeman rotation."""
    return pauli("z", 1) + pauli("z", 2)


def exchange_operator() -> np.ndarray:
    """The isotropic coupling sigma^(1) . sigma^(2)."""
    return sum(pauli(axis, 1) @ pauli(axis, 2) for axis in "xyz")


def spherical_harmonic_y2(m: int, ang: AngularConfig) -> complex:
    """Rank-2 spherical harmonic Y^2_m(theta, phi).

    Orthonormal physics convention with the Condon-Shortley phase,
    written out as closed-form polynomials in cos/sin theta.
    """
    theta, phi = ang.theta, ang.phi
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    if m == 0:
        return complex(0.25 * np.sqrt(5 / np.pi) * (3 * cos_t**2 - 1))
    if abs(m) == 1:
        magnitude = 0.5 * np.sqrt(15 / (2 * np.pi)) * sin_t * cos_t
        return complex(-m * magnitude * np.exp(1j * m * phi))
    if abs(m) == 2:
        magnitude = 0.25 * np.sqrt(15 / (2 * np.pi)) * sin_t**2
        return complex(magnitude * np.exp(1j * m * phi))
    raise ValueError(f"Order m must be in {ORDERS}, got {m}.")


def build_t2(m: int) -> np.ndarray:
    """Two-spin irreducible spherical tensor T^2_m of rank 2."""
    z1, z2 = pauli("z", 1), pauli("z", 2)
    if m == 0:
        return (3 * z1 @ z2 - exchange_operator()) / (2 * np.sqrt(6))
    if abs(m) == 1:
        ladder = "+" if m > 0 else "-"
        up1, up2 = pauli(ladder, 1), pauli(ladder, 2)
        return -m * 0.5 * (z1 @ up2 + up1 @ z2)
    if abs(m) == 2:
        ladder = "+" if m > 0 else "-"
        return pauli(ladder, 1) @ pauli(ladder, 2)
    raise ValueError(f"Order m must be in {ORDERS}, got {m}.")


def spherical_tensor_set() -> Dict[int, np.ndarray]:
    """All five T^2_m keyed by order."""
    return {m: build_t2(m) for m in ORDERS}


def dipolar_coefficients(
    omega_d: float, ang: AngularConfig
) -> Dict[int, complex]:
    """omega_{d,m} = (-1)^m Y^2_{-m}(theta, phi) omega_d for every order."""
    if omega_d < 0:
        raise ValueError("Dipolar strength omega_d must be non-negative.")
    return {
        m: (-1) ** m * spherical_harmonic_y2(-m, ang) * omega_d
        for m in ORDERS
    }


def dipolar_hamiltonian(
    omega_d: float, ang: AngularConfig
) -> Tuple[np.ndarray, Dict[int, complex]]:
    """Full dipolar Hamiltonian sum_m omega_{d,m} T^2_m.

    Returns the operator together with the coefficient map omega_{d,m}.
    """
    coefficients = dipolar_coefficients(omega_d, ang)
    hamiltonian = sum(
        coefficients[m] * tensor
        for m, tensor in spherical_tensor_set().items()
    )
    return hamiltonian, coefficients


def ket(bits: str) -> np.ndarray:
    """Computational basis ket, e.g. ket("01") = |0>|1>."""
    vector = np.zeros(4, dtype=complex)
    vector[int(bits, 2)] = 1.0
    return vector


_BELL_KETS = {
    "psi_minus": ("01", "10", -1),
    "psi_plus": ("01", "10", 1),
    "phi_minus": ("00", "11", -1),
    "phi_plus": ("00", "11", 1),
}


def bell_projector(name: str) -> np.ndarray:
    """Density matrix of a Bell state, e.g. psi_minus = (|01> - |10>)/sqrt(2).

    Names are psi_minus, psi_plus, phi_minus and phi_plus.
    """
    if name not in _BELL_KETS:
        raise ValueError(
            f"Unknown Bell state {name!r}, expected one of {list(_BELL_KETS)}."
        )
    first, second, sign = _BELL_KETS[name]
    psi = (ket(first) + sign * ket(second)) / np.sqrt(2)
    return np.outer(psi, psi.conj())


def singlet_state() -> np.ndarray:
    """Density matrix of the singlet (|01> - |10>)/sqrt(2)."""
    return bell_projector("psi_minus")


def triplet_state() -> np.ndarray:
    """Density matrix of the m = 0 triplet (|01> + |10>)/sqrt(2)."""
    return bell_projector("psi_plus")
