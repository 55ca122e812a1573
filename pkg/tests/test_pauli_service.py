import unittest

import numpy as np

from models.gate import Gate
from models.pauli_string import PauliString
from services.errors import UsageError
from services.pauli_service import (
    check_tableau,
    factorize_correction,
    pauli_dagger,
    pauli_multiply,
    pauli_to_matrix,
    paulis_commute,
    random_clifford_circuit,
    tableau_conjugate,
    tableau_from_circuit,
)
from services.simulator_service import circuit_unitary


class TestPauliAlgebra(unittest.TestCase):
    def setUp(self) -> None:
        self.x = PauliString.single(1, 0, "X")
        self.y = PauliString.single(1, 0, "Y")
        self.z = PauliString.single(1, 0, "Z")

    def test_multiply_tracks_phase(self) -> None:
        self.assertEqual(pauli_multiply(self.z, self.x).phase, 2)
        self.assertEqual(pauli_multiply(self.x, self.z).phase, 0)
        square = pauli_multiply(self.y, self.y)
        self.assertTrue(square.is_identity(ignore_phase=False))

    def test_multiply_matches_dense_product(self) -> None:
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = PauliString.from_bits(rng.integers(2, size=3), rng.integers(2, size=3), int(rng.integers(4)))
            b = PauliString.from_bits(rng.integers(2, size=3), rng.integers(2, size=3), int(rng.integers(4)))
            np.testing.assert_allclose(
                pauli_to_matrix(pauli_multiply(a, b)),
                pauli_to_matrix(a) @ pauli_to_matrix(b),
                atol=1e-12,
            )

    def test_dagger_of_y_is_y(self) -> None:
        self.assertEqual(pauli_dagger(self.y), self.y)

    def test_commutation(self) -> None:
        self.assertFalse(paulis_commute(self.x, self.z))
        xx = PauliString.from_bits([1, 1], [0, 0])
        zz = PauliString.from_bits([0, 0], [1, 1])
        self.assertTrue(paulis_commute(xx, zz))

    def test_width_mismatch_raises(self) -> None:
        with self.assertRaises(UsageError):
            pauli_multiply(self.x, PauliString.identity(2))

    def test_from_text_rejects_bad_bits(self) -> None:
        with self.assertRaises(UsageError):
            PauliString.from_text("+;12;00")
        with self.assertRaises(UsageError):
            PauliString.from_text("x;1;0")


class TestCliffordTableau(unittest.TestCase):
    def setUp(self) -> None:
        self.rng = np.random.default_rng(11)

    def test_conjugation_matches_dense_unitary(self) -> None:
        for _ in range(10):
            gates = random_clifford_circuit(2, 12, self.rng)
            tableau = tableau_from_circuit(gates, 2)
            unitary = circuit_unitary(gates, 2)
            self.assertTrue(check_tableau(tableau))

            p = PauliString.from_bits(self.rng.integers(2, size=2), self.rng.integers(2, size=2))
            expected = unitary @ pauli_to_matrix(p) @ unitary.conj().T
            np.testing.assert_allclose(pauli_to_matrix(tableau_conjugate(tableau, p)), expected, atol=1e-10)

    def test_hadamard_swaps_x_and_z(self) -> None:
        tableau = tableau_from_circuit([Gate.of("H", 0)], 1)
        self.assertEqual(tableau.x_images[0].to_text(), "+;0;1")
        self.assertEqual(tableau.z_images[0].to_text(), "+;1;0")

    def test_factorize_correction_with_no_outcomes_is_identity(self) -> None:
        tableau = tableau_from_circuit(random_clifford_circuit(3, None, self.rng), 3)
        self.assertTrue(factorize_correction(tableau, [0, 0, 0], [0, 0, 0]).is_identity(ignore_phase=False))

    def test_non_clifford_gate_rejected(self) -> None:
        with self.assertRaises(UsageError):
            tableau_from_circuit([Gate.of("T", 0)], 1)

    def test_random_circuit_default_length(self) -> None:
        self.assertEqual(len(random_clifford_circuit(3, None, self.rng)), 45)
        with self.assertRaises(UsageError):
            random_clifford_circuit(2, -1, self.rng)


if __name__ == "__main__":
    unittest.main()
