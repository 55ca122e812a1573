import json
import os
import shutil
import tempfile
import unittest
from unittest import mock

from main import main
from services.envelope import PROJECT_ROOT


class TestCommandLine(unittest.TestCase):
    def setUp(self) -> None:
        self._dir = tempfile.mkdtemp()
        env = {"TP_ENVELOPE": str(PROJECT_ROOT / "data" / "envelope.json"), "TP_WORKER_COUNT": "2"}
        self._env_patch = mock.patch.dict(os.environ, env)
        self._env_patch.start()

    def tearDown(self) -> None:
        self._env_patch.stop()
        shutil.rmtree(self._dir, ignore_errors=True)

    def _out(self, name: str) -> str:
        return os.path.join(self._dir, name)

    @staticmethod
    def _read(path: str) -> str:
        with open(path, encoding="utf-8") as handle:
            return handle.read()

    def test_missing_or_unknown_subcommand(self) -> None:
        self.assertEqual(main([]), 2)
        self.assertEqual(main(["bogus"]), 2)

    def test_argparse_errors_exit_with_usage_code(self) -> None:
        with self.assertRaises(SystemExit) as ctx:
            main(["zk-run", "--k", "two"])
        self.assertEqual(ctx.exception.code, 2)

    def test_teleport_is_deterministic(self) -> None:
        first, second = self._out("a.json"), self._out("b.json")
        self.assertEqual(main(["teleport", "--n", "2", "--trials", "3", "--seed", "5", "--out", first]), 0)
        self.assertEqual(main(["teleport", "--n", "2", "--trials", "3", "--seed", "5", "--out", second]), 0)
        self.assertEqual(self._read(first), self._read(second))

        report = json.loads(self._read(first))
        self.assertTrue(report["verified"])
        self.assertLessEqual(report["max_trace_distance"], 1e-10)
        self.assertEqual([trial["trial"] for trial in report["trials"]], [0, 1, 2])

    def test_existing_output_needs_force(self) -> None:
        path = self._out("t.json")
        self.assertEqual(main(["teleport", "--n", "1", "--trials", "1", "--out", path]), 0)
        self.assertEqual(main(["teleport", "--n", "1", "--trials", "1", "--out", path]), 2)
        self.assertEqual(main(["teleport", "--n", "1", "--trials", "1", "--out", path, "--force"]), 0)

    def test_teleport_outside_envelope(self) -> None:
        self.assertEqual(main(["teleport", "--n", "6", "--trials", "1", "--require-verify"]), 2)
        path = self._out("big.json")
        self.assertEqual(main(["teleport", "--n", "6", "--trials", "1", "--out", path]), 0)
        report = json.loads(self._read(path))
        self.assertFalse(report["verified"])
        self.assertIsNone(report["max_trace_distance"])

    def test_zk_run_checks_stop_level(self) -> None:
        self.assertEqual(main(["zk-run", "--n", "3", "--k", "3", "--a", "0"]), 2)
        self.assertEqual(main(["zk-run", "--n", "3", "--k", "3", "--a", "3"]), 2)

    def test_zk_run_verifies_small_instances(self) -> None:
        path = self._out("zk.json")
        argv = ["zk-run", "--n", "3", "--k", "3", "--a", "2", "--trials", "2", "--seed", "1", "--out", path]
        self.assertEqual(main(argv), 0)
        report = json.loads(self._read(path))
        self.assertTrue(report["verified"])
        self.assertLessEqual(report["max_trace_distance"], 1e-9)
        self.assertLessEqual(report["residual_level"], 1)
        for trial in report["trials"]:
            # 2n Bell outcomes plus 4n per gadget, three gadgets at a = 2.
            self.assertEqual(len(trial["outcomes"]), 6 + 3 * 12)
            for outcome in trial["outcomes"]:
                self.assertEqual(set(outcome), {"qubit", "basis", "bit"})
                self.assertIn(outcome["bit"], (0, 1))
            self.assertEqual(trial["peak_live_width"], 15)

    def test_zk_run_require_verify_outside_envelope(self) -> None:
        self.assertEqual(main(["zk-run", "--n", "4", "--k", "3", "--a", "2", "--require-verify"]), 2)

    def test_zk_run_csv_rows(self) -> None:
        path = self._out("zk.csv")
        self.assertEqual(main(["zk-run", "--n", "2", "--k", "2", "--format", "csv", "--out", path]), 0)
        lines = self._read(path).splitlines()
        self.assertEqual(lines[0], "trial,phase,clifford1q,clifford2q,t,meas,idticks,depth,peak_width,trace_distance")
        self.assertEqual([line.split(",")[1] for line in lines[1:]], ["standard", "consume", "prep"])

    def test_dme_sweep_csv(self) -> None:
        path = self._out("sweep.csv")
        argv = ["dme-sweep", "--t", "1.0", "--m", "10,20,40", "--trials", "2", "--out", path]
        self.assertEqual(main(argv), 0)
        lines = self._read(path).splitlines()
        self.assertEqual(lines[0], "m,t,mean_error,std_error,n_probes,seed")
        self.assertEqual([line.split(",")[0] for line in lines[1:]], ["10", "20", "40"])

    def test_dme_sweep_rejects_bad_copy_counts(self) -> None:
        self.assertEqual(main(["dme-sweep", "--m", "10,0"]), 2)
        self.assertEqual(main(["dme-sweep", "--m", "ten"]), 2)

    def test_cost_table(self) -> None:
        self.assertEqual(main(["cost-table", "--n", "5..3"]), 2)
        path = self._out("table.csv")
        self.assertEqual(main(["cost-table", "--n", "2..4", "--k", "2", "--format", "csv", "--out", path]), 0)
        lines = self._read(path).splitlines()
        self.assertTrue(lines[0].startswith("n,k,a,phase,"))
        self.assertEqual(len(lines), 1 + 3 * 3)

    def test_selftest_detects_corrupted_table(self) -> None:
        path = self._out("selftest.json")
        self.assertEqual(main(["selftest", "--corrupt-table", "--samples", "10", "--out", path]), 1)
        report = json.loads(self._read(path))
        self.assertFalse(report["passed"])
        self.assertTrue(report["failures"]["selective_tables"])


if __name__ == "__main__":
    unittest.main()
