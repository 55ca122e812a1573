import unittest

import numpy as np

from models.gate import Gate
from models.transcript import Transcript
from services.errors import UsageError
from services.pauli_service import pauli_to_matrix, random_clifford_circuit
from services.simulator_service import (
    GATE_MATRICES,
    combine_states,
    product_state,
    pure_trace_distance,
    random_product_state,
    state_vector,
    symbolic_state,
)
from services.teleport_service import (
    CHOICE_A,
    CHOICE_B,
    bell_measure,
    frozen_tables,
    gate_teleport,
    prepare_bell_pairs,
    prepare_gate_resource,
    selective_gate_teleport,
    teleport_clifford,
    verify_selective_tables,
)


class TestGateTeleportation(unittest.TestCase):
    def setUp(self) -> None:
        self.rng = np.random.default_rng(21)

    def test_uncorrected_output_carries_byproduct(self) -> None:
        psi = random_product_state(1, self.rng)
        psi_vector = state_vector(psi, psi.live_qubits)
        resource = prepare_gate_resource([Gate.of("H", 0)], 1)

        state, transcript = gate_teleport(psi, resource, None, self.rng)
        byproduct = pauli_to_matrix(transcript.byproducts[0])
        expected = GATE_MATRICES["H"] @ byproduct @ psi_vector

        self.assertEqual(len(transcript.outcomes), 2)
        self.assertLess(pure_trace_distance(expected, state_vector(state, state.live_qubits)), 1e-10)

    def test_corrected_clifford_teleportation_matches_direct(self) -> None:
        for n in (1, 2, 3):
            circuit = random_clifford_circuit(n, None, self.rng)
            run = teleport_clifford(circuit, n, random_product_state(n, self.rng), self.rng)
            self.assertLess(run.trace_distance_to_direct, 1e-10)
            self.assertEqual(len(run.output), n)

    def test_identity_resource_is_plain_teleportation(self) -> None:
        run = teleport_clifford([], 1, product_state([np.array([0.6, 0.8])]), self.rng)
        self.assertLess(run.trace_distance_to_direct, 1e-10)
        self.assertEqual(run.prep_ledger.clifford_2q, 1)
        self.assertEqual(run.consume_ledger.measurements, 2)

    def test_symbolic_run_is_ledger_only(self) -> None:
        circuit = random_clifford_circuit(6, None, self.rng)
        run = teleport_clifford(circuit, 6, symbolic_state(6), self.rng)
        self.assertIsNone(run.trace_distance_to_direct)
        self.assertEqual(run.consume_ledger.measurements, 12)
        self.assertGreater(run.prep_ledger.clifford_2q, 0)

    def test_bell_measurement_outcomes_are_uniform(self) -> None:
        psi = random_product_state(1, self.rng)
        pair_state, ((first, _),) = prepare_bell_pairs(1)
        joint, label_map = combine_states(psi, pair_state)
        pairs = [(psi.live_qubits[0], label_map[first])]
        trials = 10_000
        counts = {}
        for _ in range(trials):
            bits, _ = bell_measure(joint.copy(), pairs, self.rng)
            counts[bits[0]] = counts.get(bits[0], 0) + 1

        self.assertEqual(set(counts), {(0, 0), (0, 1), (1, 0), (1, 1)})
        for count in counts.values():
            self.assertAlmostEqual(count / trials, 0.25, delta=0.02)

    def test_width_mismatch_raises(self) -> None:
        resource = prepare_gate_resource([], 2)
        with self.assertRaises(UsageError):
            gate_teleport(random_product_state(1, self.rng), resource, None, self.rng)


class TestSelectiveTeleportation(unittest.TestCase):
    def setUp(self) -> None:
        self.rng = np.random.default_rng(4)

    def test_frozen_tables_match_derivation(self) -> None:
        self.assertEqual(verify_selective_tables(), [])

    def test_corrupted_table_is_reported(self) -> None:
        tables = frozen_tables()
        rule = tables["source"][CHOICE_B]["byproduct"]
        rule["x"], rule["z"] = rule["z"], rule["x"]
        mismatches = verify_selective_tables(tables)
        self.assertEqual(len(mismatches), 1)
        self.assertIn("source", mismatches[0])

    def test_gate_gadget_applies_selected_unitary(self) -> None:
        cases = (
            (CHOICE_A, [Gate.of("H", 0)], [Gate.of("T", 0)], GATE_MATRICES["H"]),
            (CHOICE_B, [Gate.of("S", 0)], [Gate.of("T", 0)], GATE_MATRICES["T"]),
        )
        for choice, ua, ub, matrix in cases:
            for _ in range(4):
                psi = random_product_state(1, self.rng)
                psi_vector = state_vector(psi, psi.live_qubits)
                transcript = Transcript()

                state, p1, p2 = selective_gate_teleport(psi, ua, ub, choice, self.rng, transcript)
                expected = pauli_to_matrix(p1) @ matrix @ pauli_to_matrix(p2) @ psi_vector

                self.assertEqual(transcript.choices, [choice])
                self.assertEqual(state.width, 1)
                self.assertLess(pure_trace_distance(expected, state_vector(state, state.live_qubits)), 1e-9)

    def test_unselected_unitary_must_be_diagonal(self) -> None:
        psi = random_product_state(1, self.rng)
        with self.assertRaises(UsageError):
            selective_gate_teleport(psi, [Gate.of("T", 0)], [Gate.of("H", 0)], CHOICE_A, self.rng)

    def test_invalid_choice_raises(self) -> None:
        with self.assertRaises(UsageError):
            selective_gate_teleport(random_product_state(1, self.rng), [], [], 2, self.rng)


if __name__ == "__main__":
    unittest.main()
