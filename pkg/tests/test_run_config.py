import math
import os
import tempfile
import unittest

import numpy as np

from models.run_config import RunConfig, parse_n_range
from services.errors import UsageError
from services.report_writer import check_output_path, emit, round_floats, to_csv_text, to_json_text


class TestRunConfig(unittest.TestCase):
    def test_parse_n_range(self) -> None:
        self.assertEqual(parse_n_range("5"), (5,))
        self.assertEqual(parse_n_range("2..5"), (2, 3, 4, 5))
        for text in ("5..3", "", "two", "2..x"):
            with self.assertRaises(UsageError):
                parse_n_range(text)

    def test_zk_run_validation(self) -> None:
        RunConfig(subcommand="zk-run", n=3, k=3, a=2)
        RunConfig(subcommand="zk-run", n=1, k=1, a=1)
        for n, k, a in ((3, 3, 0), (3, 3, 3), (2, 3, None), (2, 0, None)):
            with self.assertRaises(UsageError):
                RunConfig(subcommand="zk-run", n=n, k=k, a=a)

    def test_default_stop_level(self) -> None:
        self.assertEqual(RunConfig(subcommand="zk-run", n=4, k=4).stop_level, 2)
        self.assertEqual(RunConfig(subcommand="zk-run", n=2, k=1).stop_level, 1)

    def test_common_validation(self) -> None:
        with self.assertRaises(UsageError):
            RunConfig(subcommand="bogus")
        with self.assertRaises(UsageError):
            RunConfig(subcommand="teleport", format="xml")
        with self.assertRaises(UsageError):
            RunConfig(subcommand="teleport", trials=0)
        with self.assertRaises(UsageError):
            RunConfig(subcommand="teleport", seed=-1)
        with self.assertRaises(UsageError):
            RunConfig(subcommand="teleport", n=0)

    def test_subcommand_specific_validation(self) -> None:
        with self.assertRaises(UsageError):
            RunConfig(subcommand="dme-sweep", n=5)
        with self.assertRaises(UsageError):
            RunConfig(subcommand="dme-sweep", n=1, t=math.inf)
        with self.assertRaises(UsageError):
            RunConfig(subcommand="cost-table")
        with self.assertRaises(UsageError):
            RunConfig(subcommand="selftest", eps=0.0)

    def test_to_dict_leaves_out_the_output_path(self) -> None:
        data = RunConfig(subcommand="cost-table", n_values=(2, 3), out_path="x.json").to_dict()
        self.assertNotIn("out_path", data)
        self.assertEqual(data["n"], [2, 3])


class TestReportWriter(unittest.TestCase):
    def setUp(self) -> None:
        fd, self._path = tempfile.mkstemp(suffix=".json")
        os.close(fd)

    def tearDown(self) -> None:
        if os.path.exists(self._path):
            os.remove(self._path)

    def test_round_floats(self) -> None:
        self.assertEqual(round_floats(1 / 3), 0.333333333333)
        self.assertEqual(round_floats({"a": [np.float64(2.0), np.int64(3), np.bool_(True)]}), {"a": [2.0, 3, True]})
        self.assertIsNone(round_floats(float("nan")))

    def test_json_is_sorted_and_newline_terminated(self) -> None:
        self.assertEqual(to_json_text({"b": 1, "a": 2}), '{\n  "a": 2,\n  "b": 1\n}\n')

    def test_csv_uses_unix_line_endings(self) -> None:
        self.assertEqual(to_csv_text(("m", "err"), [(1, 0.5), (2, "")]), "m,err\n1,0.5\n2,\n")

    def test_existing_output_needs_force(self) -> None:
        with self.assertRaises(UsageError):
            check_output_path(self._path, force=False)
        emit("first\n", self._path, force=True)
        with open(self._path, encoding="utf-8") as handle:
            self.assertEqual(handle.read(), "first\n")


if __name__ == "__main__":
    unittest.main()
