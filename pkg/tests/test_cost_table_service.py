import unittest

import numpy as np

from constants.report_constants import PHASE_CONSUME, PHASE_PREP, PHASE_STANDARD
from services.cost_table_service import (
    FAMILY_CLIFFORD,
    FAMILY_ZK,
    column_points,
    fit_summary,
    table1_report,
)
from services.envelope import Envelope, ZkVerifyEntry
from services.errors import UsageError
from services.selftest_service import check_commutation_suite, run_selftest
from services.teleport_service import CHOICE_A, frozen_tables

SMALL_ENVELOPE = Envelope(
    max_simulated_qubits=16,
    teleport_max_n=5,
    zk_verify=(ZkVerifyEntry(max_n=3, max_k=3),),
)


class TestCostTable(unittest.TestCase):
    def test_zk_rows_are_verified_inside_envelope(self) -> None:
        report = table1_report([2, 3, 4], k=2, a=1, seeds=[0, 1], envelope=SMALL_ENVELOPE)

        self.assertEqual([entry.n for entry in report.entries], [2, 3, 4])
        self.assertEqual([entry.verified for entry in report.entries], [True, True, False])
        self.assertLessEqual(report.max_trace_distance, 1e-9)
        self.assertIsNone(report.entries[2].max_trace_distance)
        self.assertEqual(len(report.csv_rows()), 9)
        self.assertEqual([row[3] for row in report.csv_rows()[:3]], [PHASE_STANDARD, PHASE_CONSUME, PHASE_PREP])

    def test_fits_cover_every_column(self) -> None:
        report = table1_report([2, 3, 4, 5], k=2, a=1, seeds=[3])
        summary = fit_summary(report)
        self.assertEqual(set(summary), {PHASE_STANDARD, PHASE_CONSUME, PHASE_PREP, "classical_ops"})
        self.assertIsNotNone(report.fits[PHASE_PREP])
        self.assertGreater(summary[PHASE_PREP], 0.0)
        self.assertEqual([n for n, _ in column_points(report, PHASE_CONSUME)], [2, 3, 4, 5])

    def test_two_sizes_give_no_fit(self) -> None:
        report = table1_report([2, 3], k=2, a=1, seeds=[0])
        self.assertTrue(all(fit is None for fit in report.fits.values()))

    def test_clifford_family(self) -> None:
        report = table1_report([1, 2, 3], k=2, a=1, seeds=[5], envelope=SMALL_ENVELOPE, family=FAMILY_CLIFFORD)
        self.assertTrue(all(entry.verified for entry in report.entries))
        self.assertLessEqual(report.max_trace_distance, 1e-10)
        self.assertEqual([entry.standard.gate_count for entry in report.entries], [5, 20, 45])

    def test_same_seed_gives_same_table(self) -> None:
        first = table1_report([2, 3], k=2, a=1, seeds=[9], envelope=SMALL_ENVELOPE).to_dict()
        second = table1_report([2, 3], k=2, a=1, seeds=[9], envelope=SMALL_ENVELOPE).to_dict()
        self.assertEqual(first, second)

    def test_invalid_requests_raise(self) -> None:
        with self.assertRaises(UsageError):
            table1_report([], k=2, a=1, seeds=[0])
        with self.assertRaises(UsageError):
            table1_report([2], k=2, a=1, seeds=[])
        with self.assertRaises(UsageError):
            table1_report([1, 2], k=2, a=1, seeds=[0])
        with self.assertRaises(UsageError):
            table1_report([3], k=3, a=3, seeds=[0])
        with self.assertRaises(UsageError):
            table1_report([3], k=2, a=1, seeds=[0], family="qft")
        with self.assertRaises(UsageError):
            column_points(table1_report([2], k=2, a=1, seeds=[0]), "width")


class TestSelftest(unittest.TestCase):
    def test_commutation_suite_passes(self) -> None:
        self.assertEqual(check_commutation_suite(np.random.default_rng(0), samples=200), [])

    def test_corrupted_table_fails(self) -> None:
        tables = frozen_tables()
        rule = tables["destination"][CHOICE_A]["byproduct"]
        rule["x"], rule["z"] = rule["z"], rule["x"]

        report = run_selftest(0, tables=tables, samples=20)
        self.assertFalse(report.passed)
        self.assertTrue(report.failures["selective_tables"])
        self.assertEqual(report.failures["commutation"], [])

    def test_clean_run_passes(self) -> None:
        report = run_selftest(1, samples=50)
        self.assertTrue(report.passed)
        self.assertIsNotNone(report.budget_constant)
        self.assertTrue(report.to_dict()["passed"])


if __name__ == "__main__":
    unittest.main()
