import unittest

import numpy as np

from constants.sim_constants import BASIS_X, BASIS_Z
from models.gate import Gate, GateTape
from models.statevector import MeasurementOutcome
from services.errors import SimulatorInternalError, UsageError
from services.simulator_service import (
    allocate_qubits,
    allocate_register,
    apply_gate,
    apply_mcz,
    circuit_unitary,
    combine_states,
    empty_state,
    measure_qubit,
    postselect_qubit,
    product_state,
    pure_trace_distance,
    random_product_state,
    release_qubits,
    state_vector,
    symbolic_state,
)


class TestStatevectorSimulator(unittest.TestCase):
    def setUp(self) -> None:
        self.rng = np.random.default_rng(7)

    def _bell_state(self):
        state = empty_state()
        q0, q1 = allocate_register(state, 2)
        apply_gate(state, "H", [q0])
        apply_gate(state, "CNOT", [q0, q1])
        return state, q0, q1

    def test_h_then_cnot_prepares_bell_state(self) -> None:
        state, q0, q1 = self._bell_state()
        expected = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
        np.testing.assert_allclose(state_vector(state, [q0, q1]), expected, atol=1e-12)

    def test_state_vector_respects_requested_order(self) -> None:
        state = product_state([np.array([0, 1]), np.array([1, 0])])
        np.testing.assert_allclose(state_vector(state, [0, 1]), [0, 0, 1, 0], atol=1e-12)
        np.testing.assert_allclose(state_vector(state, [1, 0]), [0, 1, 0, 0], atol=1e-12)

    def test_measurement_removes_qubit_and_collapses_partner(self) -> None:
        state, q0, q1 = self._bell_state()
        outcome, state = measure_qubit(state, q0, BASIS_Z, self.rng)

        self.assertEqual(state.live_qubits, [q1])
        remaining = state_vector(state, [q1])
        self.assertAlmostEqual(abs(remaining[outcome.bit]), 1.0, places=12)

    def test_x_basis_measurement_of_plus_is_deterministic(self) -> None:
        state = empty_state()
        (q,) = allocate_register(state, 1, "+")
        for _ in range(5):
            trial = state.copy()
            outcome, _ = measure_qubit(trial, q, BASIS_X, self.rng)
            self.assertEqual(outcome.bit, 0)

    def test_postselect_zero_probability_raises(self) -> None:
        state = empty_state()
        (q,) = allocate_register(state, 1)
        with self.assertRaises(UsageError):
            postselect_qubit(state, q, BASIS_Z, 1)

    def test_failed_postselect_leaves_state_untouched(self) -> None:
        state = product_state([np.array([1, 1]), np.array([1, 0])])
        before = state_vector(state, [0, 1])
        with self.assertRaises(UsageError):
            postselect_qubit(state, 0, BASIS_X, 1)
        self.assertEqual(state.live_qubits, [0, 1])
        np.testing.assert_allclose(state_vector(state, [0, 1]), before, atol=1e-12)

    def test_recycled_measurements_match_reference_without_recycling(self) -> None:
        for seed in range(12):
            circuit_rng = np.random.default_rng(seed)
            n = 2 + seed % 5
            recycled = random_product_state(n, circuit_rng)
            reference = recycled.copy()
            recycled_rng = np.random.default_rng(100 + seed)
            reference_rng = np.random.default_rng(100 + seed)
            unmeasured = list(range(n))
            measured = []

            for _ in range(8 * n):
                roll = circuit_rng.random()
                if len(unmeasured) > 1 and roll < 0.15:
                    q = unmeasured.pop(int(circuit_rng.integers(len(unmeasured))))
                    basis = BASIS_X if circuit_rng.random() < 0.5 else BASIS_Z
                    outcome, _ = measure_qubit(recycled, q, basis, recycled_rng)
                    kept, _ = measure_qubit(reference, q, basis, reference_rng, recycle=False)
                    self.assertEqual(outcome.bit, kept.bit)
                    measured.append((q, basis, outcome.bit))
                    continue
                if len(unmeasured) > 1 and roll < 0.5:
                    name = "CNOT" if circuit_rng.random() < 0.5 else "CZ"
                    targets = [int(q) for q in circuit_rng.choice(unmeasured, size=2, replace=False)]
                else:
                    name = ("H", "S", "T", "X")[int(circuit_rng.integers(4))]
                    targets = [unmeasured[int(circuit_rng.integers(len(unmeasured)))]]
                apply_gate(recycled, name, targets)
                apply_gate(reference, name, targets)

            self.assertEqual(sorted(reference.live_qubits), list(range(n)))
            for q, basis, bit in measured:
                probability, _ = postselect_qubit(reference, q, basis, bit)
                self.assertAlmostEqual(probability, 1.0, places=10)
            distance = pure_trace_distance(
                state_vector(recycled, unmeasured),
                state_vector(reference, unmeasured),
            )
            self.assertLessEqual(distance, 1e-10)

    def test_postselect_returns_branch_probability(self) -> None:
        state, q0, q1 = self._bell_state()
        probability, state = postselect_qubit(state, q0, BASIS_Z, 1)
        self.assertAlmostEqual(probability, 0.5, places=12)
        np.testing.assert_allclose(state_vector(state, [q1]), [0, 1], atol=1e-12)

    def test_release_rejects_dirty_ancilla(self) -> None:
        state = empty_state()
        (clean,) = allocate_register(state, 1)
        (dirty,) = allocate_register(state, 1, "+")

        release_qubits(state, [clean])
        self.assertEqual(state.live_qubits, [dirty])
        with self.assertRaises(SimulatorInternalError):
            release_qubits(state, [dirty])

    def test_mcz_flips_only_all_ones(self) -> None:
        plus = np.array([1, 1])
        state = product_state([plus, plus, plus])
        apply_mcz(state, [0, 1, 2])
        vector = state_vector(state, [0, 1, 2]) * np.sqrt(8)
        np.testing.assert_allclose(vector, [1, 1, 1, 1, 1, 1, 1, -1], atol=1e-12)

    def test_unknown_gate_and_wrong_arity_raise(self) -> None:
        state = empty_state()
        q0, q1 = allocate_register(state, 2)
        with self.assertRaises(UsageError):
            apply_gate(state, "FOO", [q0])
        with self.assertRaises(UsageError):
            apply_gate(state, "CNOT", [q0])
        with self.assertRaises(UsageError):
            apply_gate(state, "CZ", [q0, q0])
        with self.assertRaises(UsageError):
            apply_gate(state, "MCZ", [q0, q1])

    def test_inverse_phase_gates_undo_their_partners(self) -> None:
        state = product_state([np.array([1, 1]), np.array([1, 1j])])
        before = state_vector(state, [0, 1])
        for gate, inverse in (("S", "SDG"), ("T", "TDG"), ("I", "I")):
            apply_gate(state, gate, [1])
            apply_gate(state, inverse, [1])
        np.testing.assert_allclose(state_vector(state, [0, 1]), before, atol=1e-12)

    def test_allocate_rejects_unknown_initial_symbol(self) -> None:
        with self.assertRaises(UsageError):
            allocate_qubits(empty_state(), 2, "0-")

    def test_symbolic_state_records_gates_without_amplitudes(self) -> None:
        tape = GateTape()
        state = symbolic_state(2, tape=tape)
        apply_gate(state, "H", [0])
        apply_gate(state, "CNOT", [0, 1])
        outcome, state = measure_qubit(state, 0, BASIS_Z, self.rng)

        self.assertIn(outcome.bit, (0, 1))
        self.assertEqual(state.live_qubits, [1])
        self.assertEqual([gate.name for gate in tape.gates()], ["H", "CNOT", "MEASURE"])
        with self.assertRaises(UsageError):
            state_vector(state, [1])

    def test_circuit_unitary_uses_qubit_zero_as_msb(self) -> None:
        unitary = circuit_unitary([Gate.of("CNOT", 0, 1)], 2)
        expected = np.array(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
            dtype=complex,
        )
        np.testing.assert_allclose(unitary, expected, atol=1e-12)

    def test_combine_states_shifts_second_labels(self) -> None:
        a = product_state([np.array([1, 0])])
        b = product_state([np.array([0, 1])])
        combined, label_map = combine_states(a, b)

        self.assertEqual(label_map, {0: 1})
        self.assertEqual(combined.live_qubits, [0, 1])
        np.testing.assert_allclose(state_vector(combined, [0, 1]), [0, 1, 0, 0], atol=1e-12)

    def test_pure_trace_distance_ignores_global_phase(self) -> None:
        vector = np.array([0.6, 0.8j])
        self.assertLess(pure_trace_distance(vector, 1j * vector), 1e-12)
        self.assertAlmostEqual(pure_trace_distance([1, 0], [0, 1]), 1.0, places=12)
        self.assertAlmostEqual(pure_trace_distance([1, 0], [1, 1]), np.sqrt(0.5), places=12)
        with self.assertRaises(UsageError):
            pure_trace_distance([1, 0], [1, 0, 0, 0])


class TestMeasurementOutcome(unittest.TestCase):
    def test_from_line_parses_fields(self) -> None:
        outcome = MeasurementOutcome.from_line("3,X,1")
        self.assertEqual((outcome.qubit, outcome.basis, outcome.bit), (3, "X", 1))
        self.assertEqual(outcome.to_line(), "3,X,1")

    def test_malformed_line_raises(self) -> None:
        for line in ("3,X", "a,Z,0", "0,Y,1", "0,Z,2"):
            with self.assertRaises(UsageError):
                MeasurementOutcome.from_line(line)


if __name__ == "__main__":
    unittest.main()
