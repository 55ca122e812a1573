import math
import unittest

import numpy as np
from scipy.linalg import expm

from models.density_matrix import DensityMatrix
from models.dme_config import DmeConfig
from services.density_matrix_service import conjugate, trace_distance
from services.dme_service import (
    calibrate_budget_constant,
    default_calibration_probes,
    dme_apply,
    error_sweep,
    exact_evolution,
    exact_exponential,
    hamiltonian_to_state,
    random_pure_density,
    reflection_budget,
    reflection_matrix,
    reflection_via_dme,
    simulate_hamiltonian,
    sweep_slope,
)
from services.errors import UsageError
from services.simulator_service import state_from_amplitudes

ZERO = DensityMatrix.from_vector([1, 0], [0])
PLUS = DensityMatrix.from_vector(np.array([1, 1]) / np.sqrt(2), [0])
MINUS = DensityMatrix.from_vector(np.array([1, -1]) / np.sqrt(2), [0])
PAULI_Z = np.diag([1.0, -1.0])


class TestDensityMatrixExponentiation(unittest.TestCase):
    def setUp(self) -> None:
        self.rng = np.random.default_rng(13)

    def test_zero_time_leaves_target_unchanged(self) -> None:
        result = dme_apply(PLUS, ZERO, 0.0, 10)
        np.testing.assert_allclose(result.matrix, PLUS.matrix, atol=1e-12)

    def test_maximally_mixed_rho_acts_trivially(self) -> None:
        mixed = DensityMatrix.maximally_mixed([0])
        target = random_pure_density(1, self.rng)
        self.assertLess(trace_distance(exact_evolution(target, mixed, 1.3), target), 1e-12)
        self.assertLess(trace_distance(dme_apply(mixed, mixed, 1.3, 25), mixed), 1e-12)
        # Each copy step mixes the target toward I/2 by sin²(t/m).
        self.assertLess(trace_distance(dme_apply(target, mixed, 1.3, 2000), target), 1e-3)

    def test_exact_exponential_of_projector(self) -> None:
        np.testing.assert_allclose(exact_exponential(ZERO, math.pi), np.diag([-1, 1]), atol=1e-12)

    def test_exact_exponential_matches_scipy(self) -> None:
        rho = random_pure_density(2, self.rng)
        np.testing.assert_allclose(exact_exponential(rho, 0.7), expm(-0.7j * rho.matrix), atol=1e-10)

    def test_projector_evolution_flips_plus_to_minus(self) -> None:
        result = dme_apply(PLUS, ZERO, math.pi, 400)
        self.assertLess(trace_distance(result, MINUS), 0.05)
        result.check(check_psd=True)

    def test_error_shrinks_with_more_copies(self) -> None:
        rho = random_pure_density(1, self.rng)
        probes = [random_pure_density(1, self.rng) for _ in range(3)]
        rows = error_sweep(rho, math.pi, (100, 200, 400, 800), probes, seed=13)

        errors = [row.mean_error for row in rows]
        self.assertEqual(errors, sorted(errors, reverse=True))
        fit = sweep_slope(rows)
        self.assertIsNotNone(fit)
        self.assertGreater(fit.exponent, -1.3)
        self.assertLess(fit.exponent, -0.7)

    def test_sweep_slope_needs_three_points(self) -> None:
        rho = random_pure_density(1, self.rng)
        rows = error_sweep(rho, 1.0, (10, 20), [random_pure_density(1, self.rng)])
        self.assertIsNone(sweep_slope(rows))

    def test_dme_rejects_width_mismatch_and_zero_copies(self) -> None:
        with self.assertRaises(UsageError):
            dme_apply(PLUS, random_pure_density(2, self.rng), 1.0, 10)
        with self.assertRaises(UsageError):
            dme_apply(PLUS, ZERO, 1.0, 0)


class TestHamiltonianSimulation(unittest.TestCase):
    def test_shifted_z_becomes_projector(self) -> None:
        rho, t_scale = hamiltonian_to_state(PAULI_Z, 1.0)
        np.testing.assert_allclose(rho.matrix, ZERO.matrix, atol=1e-12)
        self.assertAlmostEqual(t_scale, 2.0)

    def test_insufficient_shift_reports_minimum(self) -> None:
        with self.assertRaises(UsageError) as ctx:
            hamiltonian_to_state(PAULI_Z, 0.5)
        self.assertIn("1.0", str(ctx.exception))

    def test_invalid_hamiltonians_raise(self) -> None:
        for h, c in (
            (np.zeros((2, 2)), 0.0),
            (np.array([[0, 1], [0, 0]]), 2.0),
            (np.eye(3), 1.0),
            (np.ones(4), 1.0),
        ):
            with self.assertRaises(UsageError):
                hamiltonian_to_state(h, c)

    def test_simulated_hamiltonian_matches_exact(self) -> None:
        h = np.array([[0.3, 0.2 - 0.1j], [0.2 + 0.1j, -0.4]])
        target = PLUS.copy()
        result = simulate_hamiltonian(target, h, 1.0, 0.5, 400)
        expected = conjugate(PLUS, expm(-0.5j * h))
        self.assertLess(trace_distance(result, expected), 0.01)


class TestReflections(unittest.TestCase):
    def setUp(self) -> None:
        self.rng = np.random.default_rng(17)

    def test_reflection_budget(self) -> None:
        self.assertEqual(reflection_budget(3, 0.3, 1.0), 297)
        self.assertEqual(reflection_budget(1, 0.1, 1.0), 99)
        with self.assertRaises(UsageError):
            reflection_budget(0, 0.1, 1.0)

    def test_reflection_matrix(self) -> None:
        b = state_from_amplitudes(np.array([1, 0]))
        np.testing.assert_allclose(reflection_matrix(b), -PAULI_Z, atol=1e-12)

    def test_reflection_of_b_itself_is_unchanged(self) -> None:
        b = state_from_amplitudes(np.array([0.6, 0.8j]))
        target = DensityMatrix.from_vector([0.6, 0.8j], [0])
        approx = reflection_via_dme(target, b, 0.1, DmeConfig(t=math.pi))
        self.assertLess(trace_distance(approx, target), 1e-9)

    def test_reflection_via_dme_is_within_eps(self) -> None:
        config = DmeConfig(t=math.pi, budget_constant=4.0)
        for target, b in default_calibration_probes(self.rng, count=3):
            approx = reflection_via_dme(target, b, 0.1, config)
            exact = conjugate(target, reflection_matrix(b))
            self.assertLessEqual(trace_distance(approx, exact), 0.1)

    def test_calibration_picks_a_candidate(self) -> None:
        probes = default_calibration_probes(self.rng, count=2)
        constant = calibrate_budget_constant(probes, 0.2, candidates=(4.0, 8.0))
        self.assertEqual(constant, 4.0)

    def test_exact_evolution_keeps_labels(self) -> None:
        target = DensityMatrix.from_vector([0, 1], [5])
        rho = DensityMatrix.from_vector([1, 0], [0])
        self.assertEqual(exact_evolution(target, rho, 1.0).live_qubits, [5])


if __name__ == "__main__":
    unittest.main()
