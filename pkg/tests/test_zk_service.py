import unittest

import numpy as np

from models.ledger import ClassicalOpCounter
from models.zk_element import ZkElement
from services.errors import UsageError
from services.zk_service import (
    enumerate_zk,
    random_zk,
    zk_commute_x_left,
    zk_conjugate_by_x,
    zk_multiply,
    zk_to_matrix,
)


def _x_mask(n: int, qubits) -> int:
    return sum(1 << (n - 1 - q) for q in qubits)


class TestZkElementAlgebra(unittest.TestCase):
    def setUp(self) -> None:
        self.rng = np.random.default_rng(5)

    def test_cz_diagonal(self) -> None:
        cz = ZkElement.from_monomials(2, [[0, 1]])
        np.testing.assert_array_equal(zk_to_matrix(cz), [1, 1, 1, -1])

    def test_conjugating_cz_by_x_gives_z(self) -> None:
        cz = ZkElement.from_monomials(2, [[0, 1]])
        derived = zk_conjugate_by_x(cz, [0])
        self.assertEqual(derived.monomials, frozenset({(1,)}))
        self.assertEqual(derived.sign, 1)

    def test_conjugating_z_by_x_gives_minus_identity(self) -> None:
        z = ZkElement.from_monomials(1, [[0]])
        derived = zk_conjugate_by_x(z, [0])
        self.assertTrue(derived.is_identity(ignore_sign=True))
        self.assertEqual(derived.sign, -1)

    def test_every_element_is_its_own_inverse(self) -> None:
        for element in enumerate_zk(2, 2):
            product = zk_multiply(element, element)
            self.assertTrue(product.is_identity())

    def test_enumerate_counts_group(self) -> None:
        self.assertEqual(sum(1 for _ in enumerate_zk(2, 2)), 2 ** 4)

    def test_conjugation_matches_dense_identity(self) -> None:
        n = 3
        indices = np.arange(2 ** n)
        for _ in range(30):
            g = random_zk(n, 3, self.rng)
            s = [q for q in range(n) if self.rng.integers(2)]
            diagonal = zk_to_matrix(g)
            expected = diagonal[indices ^ _x_mask(n, s)] * diagonal
            np.testing.assert_array_equal(zk_to_matrix(zk_conjugate_by_x(g, s)), expected)

    def test_conjugation_lowers_level(self) -> None:
        for _ in range(50):
            g = random_zk(4, 3, self.rng)
            derived = zk_conjugate_by_x(g, [q for q in range(4) if self.rng.integers(2)])
            self.assertLessEqual(derived.level, max(g.level - 1, 0))

    def test_commute_x_left_returns_factors(self) -> None:
        g = ZkElement.from_monomials(2, [[0, 1]], k=2)
        x_s, derived, same = zk_commute_x_left(g, [1])
        self.assertEqual(x_s.x_support, (1,))
        self.assertEqual(derived.monomials, frozenset({(0,)}))
        self.assertIs(same, g)

    def test_counter_tracks_toggles(self) -> None:
        counter = ClassicalOpCounter()
        zk_conjugate_by_x(ZkElement.from_monomials(3, [[0, 1], [0, 2]]), [0], counter)
        self.assertGreater(counter.count, 0)

    def test_invalid_inputs_raise(self) -> None:
        with self.assertRaises(UsageError):
            random_zk(2, 3, self.rng)
        with self.assertRaises(UsageError):
            zk_conjugate_by_x(ZkElement.identity(2), [4])
        with self.assertRaises(UsageError):
            ZkElement(n=2, sign=1, monomials=frozenset({(0, 1)}), k=1)

    def test_from_text_parses_monomials(self) -> None:
        element = ZkElement.from_text("-;0;0,1", n=2)
        self.assertEqual(element.sign, -1)
        self.assertEqual(element.sorted_monomials, [(0,), (0, 1)])
        self.assertEqual(element.to_text(), "-;0;0,1")


if __name__ == "__main__":
    unittest.main()
