"""Simulator unit tests: gates, encoding, controlled promotion, overlap tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qspline import sim


def test_gate_rejects_non_unitary():
    with pytest.raises(ValueError):
        sim.Gate("bad", np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_gate_rejects_odd_sizes():
    with pytest.raises(ValueError):
        sim.Gate("bad", np.eye(8))


def test_x_flips_zero():
    state = sim.apply_gate(sim.zero_state(1), sim.X, 0)
    assert np.allclose(state.amplitudes, [0.0, 1.0])


def test_ry_three_pi_maps_zero_to_minus_one():
    state = sim.apply_gate(sim.zero_state(1), sim.RY_3PI, 0)
    assert np.allclose(state.amplitudes, [0.0, -1.0], atol=1e-12)


def test_ry_matrix_entries():
    gate = sim.ry(math.pi / 2)
    c, s = math.cos(math.pi / 4), math.sin(math.pi / 4)
    assert np.allclose(gate.matrix, [[c, -s], [s, c]])


def test_dagger_of_rotation_is_negative_angle():
    theta = 0.731
    assert np.allclose(sim.dagger(sim.ry(theta)).matrix, sim.ry(-theta).matrix)


def test_qubit_zero_is_least_significant_bit():
    # flipping qubit 0 moves |00> to index 1, flipping qubit 1 to index 2
    s0 = sim.apply_gate(sim.zero_state(2), sim.X, 0)
    s1 = sim.apply_gate(sim.zero_state(2), sim.X, 1)
    assert abs(s0.amplitudes[1]) == pytest.approx(1.0)
    assert abs(s1.amplitudes[2]) == pytest.approx(1.0)


def test_cx_first_target_is_control():
    # control on qubit 0: |01> (index 1) flips the target, |10> does not
    one = sim.apply_gate(sim.zero_state(2), sim.X, 0)
    flipped = sim.apply_gate(one, sim.CX, (0, 1))
    assert abs(flipped.amplitudes[3]) == pytest.approx(1.0)
    two = sim.apply_gate(sim.zero_state(2), sim.X, 1)
    kept = sim.apply_gate(two, sim.CX, (0, 1))
    assert abs(kept.amplitudes[2]) == pytest.approx(1.0)


def test_state_rejects_norm_drift():
    with pytest.raises(ValueError):
        sim.QuantumState(1, np.array([1.0, 1.0], dtype=complex))


def test_encode_three_four_vector():
    prep = sim.amplitude_encode([3.0, 4.0])
    assert np.allclose(prep.state.amplitudes, [0.6, 0.8], atol=1e-14)


def test_encode_rejects_zero_and_bad_sizes():
    with pytest.raises(ValueError):
        sim.amplitude_encode([0.0, 0.0])
    with pytest.raises(ValueError):
        sim.amplitude_encode([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        sim.amplitude_encode(np.array([1.0 + 1.0j, 0.0]))


@given(
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=0, max_value=2**31 - 1),
)
@settings(max_examples=60, deadline=None)
def test_encode_matches_normalized_input(n_qubits, seed):
    rng = np.random.default_rng(seed)
    vec = rng.uniform(-1.0, 1.0, 1 << n_qubits)
    if np.linalg.norm(vec) < 1e-6:
        vec[0] += 1.0
    prep = sim.amplitude_encode(vec)
    expected = vec / np.linalg.norm(vec)
    assert np.max(np.abs(prep.state.amplitudes.real - expected)) < 1e-12
    assert np.max(np.abs(prep.state.amplitudes.imag)) < 1e-14


@given(
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=0, max_value=2**31 - 1),
)
@settings(max_examples=40, deadline=None)
def test_encode_circuit_prepares_the_state(n_qubits, seed):
    rng = np.random.default_rng(seed)
    vec = rng.uniform(-1.0, 1.0, 1 << n_qubits)
    if np.linalg.norm(vec) < 1e-6:
        vec[0] += 1.0
    prep = sim.amplitude_encode(vec)
    replayed = sim.apply_ops(sim.zero_state(n_qubits), prep.ops)
    assert np.max(np.abs(replayed.amplitudes - prep.state.amplitudes)) < 1e-12


def test_tree_angle_count():
    assert [sim.tree_angle_count(n) for n in (1, 2, 3, 4)] == [1, 3, 7, 15]


def test_controlled_sequence_is_block_identity_and_op():
    # promoted ops act trivially on the control-0 subspace and apply the
    # original sequence on the control-1 subspace
    rng = np.random.default_rng(3)
    vec = rng.uniform(-1.0, 1.0, 4)
    ops = list(sim.amplitude_encode(vec).ops) + [(sim.CZ, (0, 1))]
    promoted = sim.controlled_ops(ops, 2)

    start = sim.zero_state(3)
    kept = sim.apply_ops(start, promoted)
    plain = sim.apply_ops(sim.zero_state(2), ops)
    assert np.max(np.abs(kept.amplitudes[:4] - [1, 0, 0, 0])) < 1e-12

    lifted = sim.apply_gate(start, sim.X, 2)  # control on
    moved = sim.apply_ops(lifted, promoted)
    assert np.max(np.abs(moved.amplitudes[4:] - plain.amplitudes)) < 1e-12


def test_controlled_ops_rejects_general_two_qubit_gates():
    swap = sim.Gate("SWAP", np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=float))
    with pytest.raises(ValueError):
        sim.controlled_ops([(swap, (0, 1))], 2)


@given(
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=0, max_value=2**31 - 1),
)
@settings(max_examples=40, deadline=None)
def test_hadamard_test_equals_direct_overlap(n_qubits, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1.0, 1.0, 1 << n_qubits)
    b = rng.uniform(-1.0, 1.0, 1 << n_qubits)
    a[0] += 2.0
    b[0] += 2.0
    pa, pb = sim.amplitude_encode(a), sim.amplitude_encode(b)
    estimated = sim.hadamard_test(pa.ops, pb.ops, n_qubits)
    direct = float(pa.state.amplitudes.real @ pb.state.amplitudes.real)
    assert abs(estimated - direct) < 1e-10


def test_hadamard_test_shots_deterministic_and_near_exact():
    a = sim.amplitude_encode([0.8, 0.6])
    b = sim.amplitude_encode([0.6, -0.8])
    exact = sim.hadamard_test(a.ops, b.ops, 1)
    one = sim.hadamard_test(a.ops, b.ops, 1, shots=100_000, seed=11)
    two = sim.hadamard_test(a.ops, b.ops, 1, shots=100_000, seed=11)
    assert one == two
    sigma = math.sqrt(max(1.0 - exact**2, 1e-12) / 100_000)
    assert abs(one - exact) < 5 * sigma + 1e-9


def test_hadamard_test_validates_qubit_range():
    prep = sim.amplitude_encode([1.0, 1.0])
    with pytest.raises(IndexError):
        sim.hadamard_test(prep.ops, [(sim.X, (5,))], 1)


def test_sample_counts_and_determinism():
    state = sim.amplitude_encode([1.0, 0.0, 1.0, 0.0]).state
    counts = sim.sample(state, 4096, seed=5)
    again = sim.sample(state, 4096, seed=5)
    assert counts.counts == again.counts
    assert sum(counts.counts.values()) == 4096
    assert set(counts.counts) <= {0, 2}
    assert counts.frequency(0) + counts.frequency(2) == pytest.approx(1.0)
    assert counts.bitstring(2, 2) == "10"


def test_states_close_ignores_global_phase():
    plus = sim.amplitude_encode([1.0, 1.0]).state
    minus = sim.QuantumState(1, -plus.amplitudes)
    other = sim.amplitude_encode([1.0, -1.0]).state
    assert sim.states_close(plus, minus)
    assert not sim.states_close(plus, other)
