import numpy as np
import pytest

from dipolar_eie.data_models.physical_params import (
    AngularConfig,
    PhysicalParams,
    RateSet,
)
from dipolar_eie.master_equation import (
    Superoperator,
    assemble_liouvillian,
    build_coherent_part,
    build_dissipator_D,
    build_dissipator_Q,
    choi_matrix,
    commutator_superoperator,
    compute_rates,
    conserved_superoperator,
    dipolar_shift_hamiltonian,
    kossakowski_dissipator,
    lamb_shift_hamiltonian,
    left_multiplication,
    propagator,
    right_multiplication,
    trace_functional,
    unvectorize,
    vectorize,
)
from dipolar_eie.spin_algebra import (
    identity,
    ket,
    pauli,
    singlet_state,
    total_sigma_z,
)


def partial_traces(rho):
    """Reduced states of qubit 1 and qubit 2."""
    tensor = rho.reshape(2, 2, 2, 2)
    return np.einsum("ijkj->ik", tensor), np.einsum("ijil->jl", tensor)


def test_vectorize_stacks_columns():
    matrix = np.arange(16).reshape(4, 4)
    vector = vectorize(matrix)
    assert vector[1] == matrix[1, 0]
    assert vector[4] == matrix[0, 1]
    assert np.array_equal(unvectorize(vector), matrix)


def test_multiplication_superoperators(rng):
    a, x, b = (rng.normal(size=(4, 4)) for _ in range(3))
    assert np.allclose(
        left_multiplication(a) @ right_multiplication(b) @ vectorize(x),
        vectorize(a @ x @ b),
    )
    assert np.allclose(
        commutator_superoperator(a) @ vectorize(x), vectorize(a @ x - x @ a)
    )


def test_choi_matrix_of_identity_map():
    """The identity map has the (unnormalised) maximally entangled
    projector as its Choi matrix, with a single eigenvalue 4."""
    eigenvalues = np.linalg.eigvalsh(choi_matrix(np.eye(16)))
    assert np.allclose(np.sort(eigenvalues), [0.0] * 15 + [4.0])


def test_superoperator_shape_validation():
    with pytest.raises(ValueError):
        Superoperator(np.zeros((4, 4)))


def test_rates_golden_values():
    """Checks the rates at theta = pi/2, where the m = 1 coupling
    vanishes and m = 2 is suppressed by its Lorentzian."""
    params = PhysicalParams(
        omega_d=1.0,
        tau_c=0.1,
        omega0=10.0,
        ang=AngularConfig(theta=np.pi / 2),
    )
    rates = compute_rates(params)
    expected_kappa2 = 15 / (32 * np.pi) * 0.1 / 5
    assert rates.kappa[1] == pytest.approx(0.0, abs=1e-30)
    assert rates.kappa[2] == pytest.approx(expected_kappa2, rel=1e-12)
    assert rates.delta_kappa[2] == pytest.approx(2 * expected_kappa2)
    assert rates.kappa[0] == pytest.approx(5 / (16 * np.pi) * 0.1)
    assert rates.omega_d0 == pytest.approx(-0.25 * np.sqrt(5 / np.pi))


def test_scaled_rates_take_precedence():
    params = PhysicalParams.from_scaled(
        kappa1=0.5, kappa2=0.25, J=2.0, delta_kappa1=0.1
    )
    rates = compute_rates(params)
    assert rates.kappa == {0: 0.0, 1: 1.0, 2: 0.5}
    assert rates.delta_kappa_of(-1) == pytest.approx(-0.2)


def test_coherent_part_vanishes_without_shifts():
    params = PhysicalParams(alpha=0.3, M0=0.4)
    hamiltonian = build_coherent_part(params, compute_rates(params))
    assert np.allclose(hamiltonian, 0)


def test_coherent_part_is_hermitian(random_params):
    for _ in range(5):
        params = random_params()
        hamiltonian = build_coherent_part(params, compute_rates(params))
        assert np.allclose(hamiltonian, hamiltonian.conj().T, atol=1e-14)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_maximally_mixed_state_is_stationary_without_polarization(alpha):
    dissipator = build_dissipator_D(PhysicalParams(alpha=alpha, M0=0.0))
    assert np.allclose(dissipator.apply(identity() / 4), 0)


@pytest.mark.parametrize("M0", [-0.5, 0.0, 0.9])
def test_singlet_is_dark_for_a_common_environment(M0):
    dissipator = build_dissipator_D(PhysicalParams(alpha=1.0, M0=M0))
    assert np.allclose(dissipator.apply(singlet_state()), 0)


@pytest.mark.parametrize("M0", [-0.5, 0.0, 0.9])
def test_longitudinal_relaxation_rate(M0):
    """Checks d<sigma_z>/dt = 2 J (M0 - <sigma_z>) per spin, evaluated
    with both spins down."""
    J = 1.7
    dissipator = build_dissipator_D(PhysicalParams(J=J, M0=M0))
    both_down = np.outer(ket("11"), ket("11"))
    rate = np.trace(pauli("z", 1) @ dissipator.apply(both_down)).real
    assert rate == pytest.approx(2 * J * (1 + M0))
    assert dissipator.rate_unit == J


def test_transverse_relaxation_rate():
    J = 0.8
    dissipator = build_dissipator_D(PhysicalParams(J=J, M0=0.3))
    rho = (identity() + 0.5 * pauli("x", 1)) / 4
    rate = np.trace(pauli("x", 1) @ dissipator.apply(rho)).real
    assert rate == pytest.approx(-J * 0.5)


def test_dipolar_dissipator_properties(rng, random_density_matrix):
    rates = RateSet(
        kappa={0: rng.uniform(), 1: rng.uniform(), 2: rng.uniform()}
    )
    dipolar = build_dissipator_Q(rates)
    assert np.allclose(trace_functional() @ dipolar.matrix, 0)
    assert np.allclose(dipolar.apply(singlet_state()), 0)
    assert np.allclose(dipolar.apply(identity() / 4), 0)
    image = dipolar.apply(random_density_matrix())
    assert np.allclose(image, image.conj().T)


def test_kossakowski_dissipator_preserves_trace(rng):
    jumps = [rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))]
    jumps.append(pauli("+", 2))
    factor = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    generator = kossakowski_dissipator(jumps, factor @ factor.conj().T)
    assert np.allclose(trace_functional() @ generator, 0)


def test_assembled_generator_is_physical(random_params):
    """Checks trace and Hermiticity preservation, a spectrum in the closed
    left half-plane and completely positive propagators."""
    for _ in range(5):
        gen = assemble_liouvillian(random_params())
        assert np.allclose(trace_functional() @ gen.matrix, 0, atol=1e-12)
        assert np.linalg.eigvals(gen.scaled()).real.max() < 1e-9
        for t in (0.1, 1.0, 10.0):
            choi = choi_matrix(propagator(gen, t))
            assert np.allclose(choi, choi.conj().T, atol=1e-9)
            assert np.linalg.eigvalsh(choi).min() > -1e-9


def test_dissipative_part_is_completely_positive(random_params):
    """Checks the Choi matrix of exp((D + Q) dt) at dt = 1e-3 / J is
    positive semidefinite for random parameters."""
    for _ in range(50):
        params = random_params()
        dissipative = build_dissipator_D(params) + build_dissipator_Q(
            compute_rates(params)
        )
        choi = choi_matrix(propagator(dissipative, 1e-3))
        assert np.allclose(choi, choi.conj().T, atol=1e-10)
        assert np.linalg.eigvalsh(choi).min() > -1e-10


def test_positivity_along_trajectory(random_params, random_density_matrix):
    gen = assemble_liouvillian(random_params())
    rho = random_density_matrix(rank=1)
    for t in np.linspace(0, 100, 21):
        evolved = unvectorize(propagator(gen, t) @ vectorize(rho))
        assert np.allclose(evolved, evolved.conj().T, atol=1e-10)
        assert np.trace(evolved).real == pytest.approx(1.0)
        assert np.linalg.eigvalsh(evolved).min() > -1e-10


def test_independent_environments_keep_product_states(
    random_density_matrix,
):
    """Without dipolar coupling and with alpha = 0 the qubits evolve
    independently, so product states stay product states."""
    params = PhysicalParams(J=1.3, delta_omega=0.4, M0=0.6)
    gen = assemble_liouvillian(params)
    first, _ = partial_traces(random_density_matrix())
    _, second = partial_traces(random_density_matrix())
    rho = np.kron(first, second)
    for t in (0.3, 2.0):
        evolved = unvectorize(propagator(gen, t) @ vectorize(rho))
        reduced = partial_traces(evolved)
        assert np.allclose(evolved, np.kron(*reduced), atol=1e-12)


def test_exchange_symmetry_for_common_environment(random_params):
    """At alpha = 1 the generator commutes with [sigma1 . sigma2, .]."""
    conserved = conserved_superoperator()
    for _ in range(3):
        gen = assemble_liouvillian(random_params(alpha=1.0)).matrix
        assert np.allclose(
            conserved @ gen - gen @ conserved, 0, atol=1e-10
        )


def test_exchange_symmetry_broken_below_common_environment():
    params = PhysicalParams(alpha=0.5)
    gen = assemble_liouvillian(params).matrix
    conserved = conserved_superoperator()
    assert not np.allclose(conserved @ gen - gen @ conserved, 0)


def test_unscaled_propagator_uses_physical_time():
    gen = assemble_liouvillian(PhysicalParams(J=2.0, M0=0.2))
    assert np.allclose(
        propagator(gen, 1.0, scaled=False), propagator(gen, 2.0)
    )


def test_lamb_shift_without_polarization():
    """Checks that at M0 = 0 the Lamb shift is a uniform Zeeman term that
    does not depend on alpha."""
    for alpha in (0.0, 0.7):
        hamiltonian = lamb_shift_hamiltonian(
            PhysicalParams(delta_omega=0.3, alpha=alpha)
        )
        assert np.allclose(hamiltonian, 0.3 * total_sigma_z())


def test_lamb_shift_cross_terms_scale_with_alpha():
    independent = lamb_shift_hamiltonian(
        PhysicalParams(delta_omega=0.3, M0=0.5)
    )
    common = lamb_shift_hamiltonian(
        PhysicalParams(delta_omega=0.3, M0=0.5, alpha=1.0)
    )
    flip_flop = pauli("+", 1) @ pauli("-", 2) + pauli("-", 1) @ pauli("+", 2)
    assert np.allclose(common - independent, -0.3 * flip_flop)
    assert np.allclose(common, common.conj().T)


def test_dipolar_shift_hamiltonian():
    rates = RateSet(delta_kappa={1: 0.2, 2: 0.5})
    hamiltonian = dipolar_shift_hamiltonian(rates)
    assert np.allclose(hamiltonian, hamiltonian.conj().T)
    assert np.trace(hamiltonian) == pytest.approx(0.0, abs=1e-14)
    assert np.allclose(
        hamiltonian @ total_sigma_z(), total_sigma_z() @ hamiltonian
    )
    assert not np.allclose(hamiltonian, 0)
    assert np.allclose(dipolar_shift_hamiltonian(RateSet()), 0)
