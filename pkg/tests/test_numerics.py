from __future__ import annotations

import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from daqc.errors import ResourceLimitError, StepSizeError, ValidationError
from daqc.numerics import (
    PAULI_MATRICES,
    BlockDiagonalPropagator,
    HarmonicCoefficient,
    HermitianOperator,
    PauliString,
    PauliSum,
    TimeDependentHamiltonian,
    basis_state,
    check_qubit_count,
    evolve_harmonic,
    evolve_static,
    fidelity,
    rotation_apply,
    static_unitary,
    two_local_unitary,
)

letters = st.text(alphabet="IXYZ", min_size=1, max_size=5)


def kron_oracle(word: str) -> np.ndarray:
    return reduce(np.kron, [PAULI_MATRICES[ch] for ch in word])


def random_state(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return v / np.linalg.norm(v)


@given(letters)
def test_dense_matches_kronecker_product(word):
    assert np.array_equal(PauliString(word).dense(), kron_oracle(word))


@given(letters, st.integers(0, 2**32 - 1))
def test_apply_matches_dense(word, seed):
    psi = random_state(len(word), seed)
    p = PauliString(word, 0.3 - 0.2j)
    assert np.allclose(p.apply(psi), p.dense() @ psi, atol=1e-14)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.text(alphabet="IXYZ", min_size=n, max_size=n),
    st.text(alphabet="IXYZ", min_size=n, max_size=n))))
def test_product_and_commutation_match_matrices(pair):
    a, b = (PauliString(w) for w in pair)
    assert np.allclose((a * b).dense(), a.dense() @ b.dense())
    commutator = a.dense() @ b.dense() - b.dense() @ a.dense()
    assert a.commutes_with(b) == np.allclose(commutator, 0)


def test_qubit_zero_is_most_significant():
    # X on qubit 0 of two flips |00> to |10> = index 2
    out = PauliString("XI").apply(basis_state(2, "00"))
    assert out[2] == 1


def test_z_eigenvalue_of_zero_is_plus_one():
    assert PauliString("Z").apply(basis_state(1, "0"))[0] == 1
    assert PauliString("Z").apply(basis_state(1, "1"))[1] == -1


def test_invalid_letters_rejected():
    with pytest.raises(ValidationError):
        PauliString("XA")
    with pytest.raises(ValidationError):
        PauliString("")


def test_dense_guard_raises_above_limit():
    with pytest.raises(ResourceLimitError):
        check_qubit_count(15)
    with pytest.raises(ResourceLimitError):
        PauliString("X" * 15).dense()


def test_pauli_sum_dense_sparse_apply_agree():
    s = PauliSum(3)
    s.add(PauliString("XZX", 0.5))
    s.add(PauliString("YIY", -0.25))
    s.add(PauliString("XZX", 0.5))
    psi = random_state(3, 1)
    dense = s.dense()
    assert np.allclose(dense, 1.0 * kron_oracle("XZX") - 0.25 * kron_oracle("YIY"))
    assert np.allclose(s.sparse().toarray(), dense)
    assert np.allclose(s.apply(psi), dense @ psi)


def test_hermitian_operator_validation():
    with pytest.raises(ValidationError):
        HermitianOperator(np.zeros((3, 3)))
    with pytest.raises(ValidationError):
        HermitianOperator(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValidationError):
        HermitianOperator(np.zeros((2, 3)))
    assert HermitianOperator(np.eye(4)).n_qubits == 2


@given(st.integers(0, 2**32 - 1), st.floats(0.0, 5.0))
def test_static_evolution_matches_expm(seed, t):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    h = (a + a.conj().T) / 2
    psi = random_state(3, seed)
    assert np.allclose(evolve_static(h, t, psi), expm(-1j * h * t) @ psi, atol=1e-10)
    u = static_unitary(h, t)
    assert np.allclose(u @ u.conj().T, np.eye(8), atol=1e-12)


def test_static_evolution_rejects_unnormalized_state():
    with pytest.raises(ValidationError):
        evolve_static(np.eye(2), 1.0, np.array([1.0, 1.0]))


def test_block_diagonal_propagator_matches_dense():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = (a + a.conj().T) / 2
    full = np.zeros((4, 4), dtype=complex)
    idx = [np.array([0, 3]), np.array([1, 2])]
    full[np.ix_(idx[0], idx[0])] = b
    full[1, 1], full[2, 2] = 0.7, -0.4
    prop = BlockDiagonalPropagator(4, [(idx[0], b), (idx[1], np.diag([0.7, -0.4]))])
    psi = random_state(2, 4)
    assert np.allclose(prop.evolve(1.3, psi), expm(-1.3j * full) @ psi)
    batch = np.stack([psi, random_state(2, 5)], axis=1)
    assert np.allclose(prop.evolve_batch(1.3, batch), expm(-1.3j * full) @ batch)
    with pytest.raises(ValidationError):
        BlockDiagonalPropagator(4, [(idx[0], b)])


def test_rk4_static_hamiltonian_matches_eigh():
    h = TimeDependentHamiltonian(2)
    h.add(PauliString("ZI"), HarmonicCoefficient(1.0))
    h.add(PauliString("IZ"), HarmonicCoefficient(0.3))
    h.add(PauliString("XX"), HarmonicCoefficient(0.2))
    psi = random_state(2, 9)
    dt = h.max_step()
    out = evolve_harmonic(h, 0.0, 5.0, psi, dt)
    ref = evolve_static(h.matrix_at(0.0), 5.0, psi)
    assert fidelity(out, ref) > 1 - 1e-8


def test_rk4_driven_qubit_matches_rabi_formula():
    # H = (w/2) Z + W cos(w t) X; in the rotating frame the population of |1>
    # follows sin^2(W t / 2) up to counter-rotating corrections of order W/w.
    w, rabi = 2 * math.pi * 5.0, 2 * math.pi * 0.05
    h = TimeDependentHamiltonian(1)
    h.add(PauliString("Z"), HarmonicCoefficient(w / 2))
    h.add(PauliString("X"), HarmonicCoefficient(0.0, ((rabi, w, 0.0),)))
    t = math.pi / rabi
    out = evolve_harmonic(h, 0.0, t, basis_state(1, "0"), h.max_step() / 2)
    assert abs(out[1]) ** 2 == pytest.approx(1.0, abs=0.02)


def test_rk4_step_ceiling_is_enforced():
    h = TimeDependentHamiltonian(1)
    h.add(PauliString("Z"), HarmonicCoefficient(math.pi))
    assert h.max_step() == pytest.approx(1 / 20)
    with pytest.raises(StepSizeError):
        evolve_harmonic(h, 0.0, 1.0, basis_state(1, "0"), 0.06)
    with pytest.raises(StepSizeError):
        evolve_harmonic(h, 0.0, 1.0, basis_state(1, "0"), -0.01)


def test_rk4_zero_span_returns_input():
    h = TimeDependentHamiltonian(1)
    h.add(PauliString("X"), HarmonicCoefficient(1.0))
    psi = basis_state(1, "1")
    assert np.array_equal(evolve_harmonic(h, 2.0, 2.0, psi, 0.01), psi)


def test_time_dependent_terms_need_real_prefactor():
    h = TimeDependentHamiltonian(1)
    with pytest.raises(ValidationError):
        h.add(PauliString("X", 1j), HarmonicCoefficient(1.0))


@given(letters, st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_rotation_matches_expm(word, angle, seed):
    psi = random_state(len(word), seed)
    ref = expm(-1j * angle * kron_oracle(word)) @ psi
    assert np.allclose(rotation_apply(word, angle, psi), ref, atol=1e-12)


def test_two_local_unitary_quarter_turn_yy():
    # Series oracle: exp(-i a YY) = sum (-i a)^k (YY)^k / k!
    yy = kron_oracle("YY")
    a = math.pi / 4
    series = sum(np.linalg.matrix_power(-1j * a * yy, k) / math.factorial(k) for k in range(30))
    assert np.allclose(two_local_unitary("Y", "Y", a, 0, 1, 2), series, atol=1e-14)
    with pytest.raises(ValidationError):
        two_local_unitary("Y", "Y", a, 1, 1, 2)


def test_fidelity_properties():
    psi = random_state(3, 0)
    assert fidelity(psi, psi) == pytest.approx(1.0)
    assert fidelity(psi, np.exp(0.7j) * psi) == pytest.approx(1.0)
    assert fidelity(basis_state(1, "0"), basis_state(1, "1")) == 0.0
    with pytest.raises(ValidationError):
        fidelity(psi, psi[:4])


def test_basis_state_validation():
    with pytest.raises(ValidationError):
        basis_state(2, "012")
