import json
import os
import tempfile
import unittest
from pathlib import Path

from services.envelope import (
    PROJECT_ROOT,
    get_envelope_path_from_env,
    get_worker_count_from_env,
    load_envelope,
    parse_envelope,
)
from services.errors import EnvelopeConfigError


class TestEnvelope(unittest.TestCase):
    def setUp(self) -> None:
        fd, self._path = tempfile.mkstemp(suffix=".json")
        os.close(fd)

    def tearDown(self) -> None:
        if os.path.exists(self._path):
            os.remove(self._path)

    def _write(self, payload) -> None:
        with open(self._path, "w", encoding="utf-8") as handle:
            handle.write(payload if isinstance(payload, str) else json.dumps(payload))

    def test_default_path_is_project_data_file(self) -> None:
        self.assertEqual(get_envelope_path_from_env({}), PROJECT_ROOT / "data" / "envelope.json")
        self.assertEqual(get_envelope_path_from_env({"TP_ENVELOPE": "  "}), PROJECT_ROOT / "data" / "envelope.json")

    def test_env_override_is_loaded(self) -> None:
        self._write({"max_simulated_qubits": 9, "teleport_max_n": 3, "zk_verify": [{"max_n": 2, "max_k": 2}]})
        envelope = load_envelope(env={"TP_ENVELOPE": self._path})

        self.assertEqual(envelope.max_simulated_qubits, 9)
        self.assertEqual(envelope.source, str(Path(self._path)))
        self.assertTrue(envelope.allows_teleport(3))
        self.assertFalse(envelope.allows_teleport(4))
        self.assertTrue(envelope.allows_zk(2, 2, 1))
        # 5n = 10 exceeds 9 simulated qubits.
        self.assertFalse(envelope.allows_zk(2, 2, 2))

    def test_shipped_envelope_covers_small_cases(self) -> None:
        envelope = load_envelope(env={})
        self.assertTrue(envelope.allows_zk(3, 3, 2))
        self.assertTrue(envelope.allows_zk(2, 2, 1))
        self.assertFalse(envelope.allows_zk(4, 3, 2))
        self.assertTrue(envelope.allows_teleport(5))

    def test_missing_and_invalid_files_raise(self) -> None:
        with self.assertRaises(EnvelopeConfigError):
            load_envelope(Path(self._path + ".missing"))
        self._write("{not json")
        with self.assertRaises(EnvelopeConfigError):
            load_envelope(Path(self._path))

    def test_parse_rejects_bad_fields(self) -> None:
        for data in (
            [],
            {"max_simulated_qubits": 0, "teleport_max_n": 1},
            {"max_simulated_qubits": 8, "teleport_max_n": True},
            {"max_simulated_qubits": 8, "teleport_max_n": 2, "zk_verify": {"max_n": 2}},
            {"max_simulated_qubits": 8, "teleport_max_n": 2, "zk_verify": [{"max_n": 2, "max_k": "3"}]},
        ):
            with self.assertRaises(EnvelopeConfigError):
                parse_envelope(data)

    def test_worker_count(self) -> None:
        self.assertEqual(get_worker_count_from_env({}), 2)
        self.assertEqual(get_worker_count_from_env({"TP_WORKER_COUNT": "4"}), 4)
        for raw in ("zero", "0", "-3"):
            with self.assertRaises(EnvelopeConfigError):
                get_worker_count_from_env({"TP_WORKER_COUNT": raw})


if __name__ == "__main__":
    unittest.main()
