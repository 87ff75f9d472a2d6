import math

import numpy as np
import pytest
from hypothesis import given, settings
from scipy.linalg import expm

from conftest import angles, bloch_vectors, densities, random_density, random_unitary
from swapcm.errors import DimensionMismatchError, NonUnitaryError, RegisterLayoutError, UnphysicalStateError
from swapcm.qcore import (
    IDENTITY2,
    IDENTITY4,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    TOL,
    DensityMatrix,
    PureState,
    bloch_from_density,
    conjugate,
    control_state,
    cswap_unitary,
    density_from_bloch,
    embed_operator,
    free_evolution_unitary,
    is_unitary,
    kron,
    named_density,
    named_state,
    partial_trace,
    pswap_unitary,
    pure_from_angles,
    swap_operator,
    swap_permutation,
    tensor,
)

HALF_PI = math.pi / 2


def ket(bits):
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def test_kron_examples():
    assert np.array_equal(kron(IDENTITY2, IDENTITY2), IDENTITY4)
    p0, p1 = np.diag([1, 0]), np.diag([0, 1])
    assert np.array_equal(kron(p0, p1), np.outer(ket("01"), ket("01")))
    xx = kron(PAULI_X, PAULI_X)
    assert np.array_equal(xx @ xx @ ket("00"), ket("00"))


def test_kron_associative_on_dyadic_inputs(rng):
    a, b, c = (rng.integers(-8, 8, size=(2, 2)) / 8 + 1j * rng.integers(-8, 8, size=(2, 2)) / 4 for _ in range(3))
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))


def test_constants_are_read_only():
    with pytest.raises(ValueError):
        PAULI_Z[0, 0] = 2


def test_density_matrix_construction_checks():
    with pytest.raises(DimensionMismatchError):
        DensityMatrix(np.eye(3) / 3)
    with pytest.raises(DimensionMismatchError):
        DensityMatrix(np.ones((2, 4)))
    with pytest.raises(DimensionMismatchError):
        DensityMatrix(np.eye(32) / 32)
    with pytest.raises(UnphysicalStateError):
        DensityMatrix(np.array([[np.nan, 0], [0, 1]]))
    rho = named_density("plus")
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 0


def test_validate_reports_each_violation():
    assert named_density("L").is_valid()
    assert DensityMatrix.maximally_mixed(3).is_valid()
    with pytest.raises(UnphysicalStateError, match="trace"):
        DensityMatrix(np.eye(2)).validate()
    with pytest.raises(UnphysicalStateError, match="Hermitian"):
        DensityMatrix(np.array([[0.5, 0.1], [0.3, 0.5]])).validate()
    with pytest.raises(UnphysicalStateError, match="eigenvalue"):
        DensityMatrix(np.diag([1.5, -0.5])).validate()


def test_pure_state_norm_checked():
    with pytest.raises(UnphysicalStateError):
        PureState(np.array([1.0, 1.0]))
    assert PureState(np.array([0.6, 0.8j])).num_qubits == 1


def test_partial_trace_examples(rng):
    a, b = random_density(rng), random_density(rng)
    assert np.allclose(partial_trace(tensor(a, b), [0]).matrix, a.matrix, atol=1e-15)
    assert np.allclose(partial_trace(tensor(a, b), [1]).matrix, b.matrix, atol=1e-15)
    phi = PureState((ket("00") + ket("11")) / math.sqrt(2)).density()
    assert np.allclose(partial_trace(phi, [0]).matrix, IDENTITY2 / 2, atol=1e-15)


def test_partial_trace_keeps_qubit_order(rng):
    a, b, c = (random_density(rng) for _ in range(3))
    abc = tensor(a, b, c)
    assert np.allclose(partial_trace(abc, [2, 0]).matrix, tensor(a, c).matrix, atol=1e-15)
    assert np.allclose(partial_trace(abc, [1, 2]).matrix, tensor(b, c).matrix, atol=1e-15)


@pytest.mark.parametrize("keep", [[], [3], [0, 0], [-1]])
def test_partial_trace_bad_indices(keep):
    with pytest.raises(RegisterLayoutError):
        partial_trace(DensityMatrix.maximally_mixed(3), keep)


def test_partial_trace_after_pswap_matches_brute_force():
    # frozen from an independent 4x4 evaluation
    g = 0.05 * HALF_PI
    u = pswap_unitary(g)
    rho = conjugate(tensor(named_density("plus"), named_density("zero")), u)
    v = bloch_from_density(partial_trace(rho, [0]))
    assert np.allclose(v, [0.9938441702975689, -0.07821723252011543, 0.006155829702431115], atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(densities(3))
def test_partial_trace_of_valid_state_is_valid(rho):
    for keep in ([0], [1], [2], [0, 2], [1, 2]):
        red = partial_trace(rho, keep)
        assert red.is_valid()
        assert abs(np.trace(red.matrix) - 1) < 1e-12


def test_swap_operator():
    s = swap_operator()
    assert np.array_equal(s @ ket("01"), ket("10"))
    assert np.array_equal(s @ s, IDENTITY4)
    plus, left = named_state("plus").amplitudes, named_state("L").amplitudes
    assert np.allclose(s @ np.kron(plus, left), np.kron(left, plus), atol=1e-16)


def test_pswap_examples():
    assert np.array_equal(pswap_unitary(0.0), IDENTITY4)
    assert np.allclose(pswap_unitary(HALF_PI), 1j * swap_operator(), atol=1e-16)
    u = pswap_unitary(0.93 * HALF_PI)
    assert np.max(np.abs(u @ u.conj().T - IDENTITY4)) < 1e-12


@given(angles)
def test_pswap_unitary_for_all_gamma(g):
    u = pswap_unitary(g)
    assert np.max(np.abs(u @ u.conj().T - IDENTITY4)) < 1e-12


def test_cswap_gate():
    u = cswap_unitary()
    assert u.shape == (8, 8)
    for bits in ("000", "001", "010", "011"):
        assert np.array_equal(u @ ket(bits), ket(bits))
    assert np.array_equal(u @ ket("101"), ket("110"))
    assert np.array_equal(u @ ket("110"), ket("101"))
    eye = np.eye(8)
    assert np.max(np.abs(u @ u.conj().T - eye)) < 1e-12
    assert np.max(np.abs(u - u.conj().T)) < 1e-12
    assert np.max(np.abs(u @ u - eye)) < 1e-12


def test_control_state():
    assert np.array_equal(control_state(0.0).amplitudes, [1, 0])
    assert np.allclose(control_state(HALF_PI).amplitudes, [0, 1], atol=1e-16)
    assert np.allclose(control_state(0.05 * HALF_PI).amplitudes, [0.996917333733128, 0.07845909572784494],
                       atol=1e-16)


def test_free_evolution_matches_matrix_exponential():
    for omega, dt in [(1.0, 0.04), (2.5, 0.3), (-1.0, 0.7)]:
        h = -0.5 * omega * PAULI_Z
        assert np.allclose(free_evolution_unitary(omega, dt), expm(-1j * h * dt), atol=1e-15)
    assert np.array_equal(free_evolution_unitary(1.0, 0.0), IDENTITY2)
    u = free_evolution_unitary(1.0, 0.04)
    assert np.max(np.abs(u @ u.conj().T - IDENTITY2)) < 1e-12


def test_free_evolution_rotates_bloch_vector_by_minus_omega_dt():
    omega, dt = 1.0, 0.04
    theta = omega * dt
    v = np.array([0.6, 0.3, -0.2])
    out = bloch_from_density(conjugate(density_from_bloch(v), free_evolution_unitary(omega, dt)))
    rot = np.array([[math.cos(-theta), -math.sin(-theta), 0], [math.sin(-theta), math.cos(-theta), 0], [0, 0, 1]])
    assert np.allclose(out, rot @ v, atol=1e-15)
    plus = bloch_from_density(conjugate(named_density("plus"), free_evolution_unitary(omega, dt)))
    assert np.allclose(plus, [math.cos(theta), -math.sin(theta), 0], atol=1e-15)


def test_bloch_examples():
    assert bloch_from_density(named_density("zero")) == (0, 0, 1)
    assert np.allclose(bloch_from_density(named_density("plus")), (1, 0, 0), atol=1e-15)
    assert bloch_from_density(DensityMatrix.maximally_mixed(1)) == (0, 0, 0)
    assert np.allclose(density_from_bloch((0, 0, 1)).matrix, named_density("zero").matrix)
    assert np.allclose(density_from_bloch((0, 1, 0)).matrix, named_density("L").matrix, atol=1e-15)
    assert np.allclose(density_from_bloch((0, 0, 0)).matrix, IDENTITY2 / 2)
    with pytest.raises(DimensionMismatchError):
        bloch_from_density(DensityMatrix.maximally_mixed(2))
    with pytest.raises(UnphysicalStateError):
        density_from_bloch((0.8, 0.8, 0.0))
    density_from_bloch((1.0 + 0.5e-10, 0, 0))


@given(bloch_vectors())
def test_bloch_round_trip(v):
    rho = density_from_bloch(v)
    assert rho.is_valid()
    assert np.allclose(bloch_from_density(rho), v, atol=1e-12, rtol=0)


def test_bloch_matches_pauli_expectations(rng):
    rho = random_density(rng)
    expect = [np.trace(rho.matrix @ p).real for p in (PAULI_X, PAULI_Y, PAULI_Z)]
    assert np.allclose(bloch_from_density(rho), expect, atol=1e-15)


def test_pure_from_angles():
    assert np.allclose(pure_from_angles(0, 0).amplitudes, [1, 0])
    assert np.allclose(bloch_from_density(pure_from_angles(HALF_PI, HALF_PI).density()), (0, 1, 0), atol=1e-15)


def test_conjugate_examples(rng):
    rho = random_density(rng, 2)
    assert np.allclose(conjugate(rho, IDENTITY4).matrix, rho.matrix, atol=1e-16)
    assert np.allclose(conjugate(named_density("zero"), PAULI_X).matrix, named_density("one").matrix)
    with pytest.raises(DimensionMismatchError):
        conjugate(rho, IDENTITY2)
    with pytest.raises(NonUnitaryError):
        conjugate(rho, 2 * IDENTITY4)
    with pytest.raises(NonUnitaryError):
        conjugate(DensityMatrix.maximally_mixed(3), 0.5 * cswap_unitary())


@settings(max_examples=50, deadline=None)
@given(densities(2))
def test_conjugate_preserves_spectrum(rho):
    out = conjugate(rho, pswap_unitary(0.93 * HALF_PI))
    assert np.allclose(np.linalg.eigvalsh(out.matrix), np.linalg.eigvalsh(rho.matrix), atol=1e-10)
    assert abs(np.trace(out.matrix) - 1) < 1e-10
    assert np.max(np.abs(out.matrix - out.matrix.conj().T)) < 1e-10


def test_conjugate_random_unitary_spectrum(rng):
    for n in (1, 2, 3, 4):
        rho = random_density(rng, n)
        out = conjugate(rho, random_unitary(rng, 1 << n))
        assert np.allclose(np.linalg.eigvalsh(out.matrix), np.linalg.eigvalsh(rho.matrix), atol=1e-10)


def test_embed_operator_matches_explicit_kron(rng):
    u = random_unitary(rng, 2)
    assert np.allclose(embed_operator(u, [1], 3), np.kron(np.kron(IDENTITY2, u), IDENTITY2))
    s = swap_operator()
    assert np.allclose(embed_operator(s, [0, 1], 3), np.kron(s, IDENTITY2))
    # reversed targets of a non-symmetric gate
    cnot = np.eye(4)[[0, 1, 3, 2]]
    flipped = embed_operator(cnot, [1, 0], 2)
    assert np.array_equal(flipped @ ket("01"), ket("11"))
    with pytest.raises(DimensionMismatchError):
        embed_operator(s, [0], 2)
    with pytest.raises(RegisterLayoutError):
        embed_operator(s, [0, 2], 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_swap_permutation_matches_embedded_swap(n):
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            perm = swap_permutation(n, a, b)
            full = embed_operator(swap_operator(), [a, b], n)
            assert np.array_equal(np.eye(1 << n)[perm], full.real)


def test_gate_constructors_unitary():
    for u in (swap_operator(), pswap_unitary(0.3), cswap_unitary(), free_evolution_unitary(1, 0.04),
              IDENTITY2, PAULI_X, PAULI_Y, PAULI_Z):
        assert is_unitary(u, 1e-12)
    assert not is_unitary(np.ones((2, 3)))
    assert TOL.hermitian == 1e-12 and TOL.min_eigenvalue == -1e-10
