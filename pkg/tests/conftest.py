import numpy as np
import pytest

from dipolar_eie.data_models.physical_params import (
    AngularConfig,
    PhysicalParams,
)
from dipolar_eie.spin_algebra import singlet_state, triplet_state


@pytest.fixture(autouse=True)
def run_in_temporary_directory(tmp_path, monkeypatch):
    """Ensures results written to default (relative) output folders during
    testing land in a temporary folder, not in the working directory."""
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def rng():
    """Fixture to give every test the same seeded random generator."""
    return np.random.default_rng(20240917)


@pytest.fixture
def random_density_matrix(rng):
    """Fixture to draw random two-qubit density matrices.

    rank=4 gives full-rank states, lower ranks give states on the
    boundary of the state space."""

    def inner_random_density_matrix(rank: int = 4) -> np.ndarray:
        factor = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
        rho = factor @ factor.conj().T
        return rho / np.trace(rho).real

    return inner_random_density_matrix


@pytest.fixture
def random_params(rng):
    """Fixture to draw random valid physical parameters, with every
    coherent and dissipative term switched on."""

    def inner_random_params(**overrides) -> PhysicalParams:
        values = {
            "J": rng.uniform(0.5, 2.0),
            "delta_omega": rng.uniform(-1.0, 1.0),
            "M0": rng.uniform(-1.0, 1.0),
            "alpha": rng.uniform(0.0, 1.0),
            "omega0": rng.uniform(0.0, 5.0),
            "tau_c": rng.uniform(0.1, 1.0),
            "omega_d": rng.uniform(0.0, 2.0),
            "ang": AngularConfig(
                theta=rng.uniform(0, np.pi), phi=rng.uniform(0, 2 * np.pi)
            ),
        }
        values.update(overrides)
        return PhysicalParams(**values)

    return inner_random_params


@pytest.fixture
def random_unitary(rng):
    """Fixture to draw Haar-like random unitaries of a given size."""

    def inner_random_unitary(size: int = 2) -> np.ndarray:
        matrix = rng.normal(size=(size, size)) + 1j * rng.normal(
            size=(size, size)
        )
        q, r = np.linalg.qr(matrix)
        return q * (np.diag(r) / np.abs(np.diag(r)))

    return inner_random_unitary


@pytest.fixture
def singlet_rho():
    return singlet_state()


@pytest.fixture
def triplet_rho():
    return triplet_state()
