"""Pauli / unitary-sum decomposition tests."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qspline import decomp, sim
from qspline.bspline import design_matrix_d1
from qspline.functions import sample_grid


def _block(a, b):
    return np.array([[1.0 - a, a], [0.0, 1.0 - b]])


def test_block_coefficients_frozen_case():
    c = decomp.block_coefficients(0.5, 0.3)
    assert c == pytest.approx((0.6, 0.25, -0.1, 0.25))


def test_block_coefficients_identity_case():
    assert decomp.block_coefficients(0.0, 0.0) == pytest.approx((1.0, 0.0, 0.0, 0.0))
    d = decomp.decompose_block(0.0, 0.0)
    assert [t.label for t in d.terms] == ["I"]
    assert d.terms[0].coefficient == pytest.approx(1.0)


def test_block_coefficients_rejects_out_of_range():
    with pytest.raises(ValueError):
        decomp.block_coefficients(1.5, 0.0)
    with pytest.raises(ValueError):
        decomp.block_coefficients(0.0, -0.1)


@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=150, deadline=None)
def test_block_coefficients_reconstruct_exactly(a, b):
    c = decomp.block_coefficients(a, b)
    basis = (np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]),
             np.diag([1.0, -1.0]), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    rebuilt = sum(ci * m for ci, m in zip(c, basis))
    assert np.max(np.abs(rebuilt - _block(a, b))) < 1e-14


@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=150, deadline=None)
def test_block_decomposition_reconstructs(a, b):
    # dropping coefficients below the cutoff leaves an error of at most two
    # cutoffs per entry (each entry draws on two of the four basis matrices)
    d = decomp.decompose_block(a, b)
    rebuilt = decomp.reconstruct(d)
    assert np.max(np.abs(rebuilt.imag)) < 1e-14
    bound = 2.0 * decomp.COEFF_CUTOFF + 1e-14
    assert np.max(np.abs(rebuilt.real - _block(a, b))) < bound


def test_phase_term_ops_reproduce_the_matrix():
    term = decomp.LcuTerm(coefficient=1.0, paulis="Y", phase=1, label="Ry(3pi)")
    mat = term.matrix()
    state = sim.apply_ops(sim.zero_state(1), term.ops())
    assert np.max(np.abs(state.amplitudes - mat @ [1.0, 0.0])) < 1e-12
    # i*Y is real
    assert np.max(np.abs(mat.imag)) < 1e-14


def test_phase_requires_a_y_factor():
    with pytest.raises(ValueError):
        decomp.LcuTerm(coefficient=1.0, paulis="XZ", phase=1, label="XZ")


def test_single_qubit_projector_decomposition():
    d = decomp.pauli_decompose(np.diag([1.0, 0.0]))
    got = {t.label: t.coefficient for t in d.terms}
    assert got == pytest.approx({"I": 0.5, "Z": 0.5})


def test_label_order_puts_qubit_zero_last():
    # diag(1,-1,1,-1) flips sign with bit 0: Z on qubit 0, identity on qubit 1
    d = decomp.pauli_decompose(np.diag([1.0, -1.0, 1.0, -1.0]))
    got = {t.label: t.coefficient for t in d.terms}
    assert got == pytest.approx({"IZ": 1.0})
    assert d.terms[0].paulis == "ZI"  # per-qubit string, entry 0 = qubit 0


@pytest.mark.parametrize("n_qubits", [1, 2, 3])
def test_random_round_trip(n_qubits):
    rng = np.random.default_rng(17 + n_qubits)
    for _ in range(25):
        matrix = rng.uniform(-2.0, 2.0, (1 << n_qubits, 1 << n_qubits))
        d = decomp.pauli_decompose(matrix)
        rebuilt = decomp.reconstruct(d)
        assert np.max(np.abs(rebuilt.real - matrix)) < 1e-12
        assert np.max(np.abs(rebuilt.imag)) < 1e-12


def test_decompose_validates_input():
    with pytest.raises(ValueError):
        decomp.pauli_decompose(np.ones((3, 3)))
    with pytest.raises(ValueError):
        decomp.pauli_decompose(np.ones((2, 4)))
    with pytest.raises(ValueError):
        decomp.pauli_decompose(np.eye(2, dtype=complex) * 1.0j)


def test_cutoff_drops_tiny_terms():
    matrix = np.eye(2) + 1e-15 * np.array([[0.0, 1.0], [1.0, 0.0]])
    d = decomp.pauli_decompose(matrix)
    assert [t.label for t in d.terms] == ["I"]


@pytest.mark.parametrize("knots,expected_terms", [(4, 12), (8, 30), (16, 68)])
def test_spline_system_term_counts(knots, expected_terms):
    matrix = design_matrix_d1(sample_grid(knots, (0.0, 1.0))).entries
    d = decomp.pauli_decompose(matrix)
    assert len(d.terms) == expected_terms
    rebuilt = decomp.reconstruct(d)
    assert np.max(np.abs(rebuilt.real - matrix)) < 1e-12


def test_term_ops_reproduce_every_spline_term():
    matrix = design_matrix_d1(sample_grid(4, (0.0, 1.0))).entries
    d = decomp.pauli_decompose(matrix)
    total = np.zeros((4, 4))
    for term in d.terms:
        # build the unitary from its gate list and accumulate
        unitary = np.eye(4, dtype=complex)
        for col in range(4):
            basis = np.zeros(4, dtype=complex)
            basis[col] = 1.0
            state = sim.QuantumState(2, basis)
            unitary[:, col] = sim.apply_ops(state, term.ops()).amplitudes
        assert np.max(np.abs(unitary.imag)) < 1e-12
        total = total + term.coefficient * unitary.real
    assert np.max(np.abs(total - matrix)) < 1e-12
