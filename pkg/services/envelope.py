"""
Verification envelope.

Purpose:
  - Say which problem sizes are small enough to verify against a dense statevector.
  - Resolve the envelope file and worker count from the environment.

Sizes outside the envelope still run, but ledger-only (symbolic states, no oracle).
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Tuple

from constants.report_constants import (
    DEFAULT_ENVELOPE_PATH,
    DEFAULT_WORKER_COUNT,
    ENVELOPE_ENV_VAR,
    WORKER_COUNT_ENV_VAR,
)
from services.errors import EnvelopeConfigError

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent


@dataclass(frozen=True)
class ZkVerifyEntry:
    max_n: int
    max_k: int

    def covers(self, n: int, k: int) -> bool:
        return n <= self.max_n and k <= self.max_k


@dataclass(frozen=True)
class Envelope:
    max_simulated_qubits: int
    teleport_max_n: int
    zk_verify: Tuple[ZkVerifyEntry, ...] = field(default_factory=tuple)
    source: Optional[str] = None

    def allows_teleport(self, n: int) -> bool:
        return 1 <= n <= self.teleport_max_n and 3 * n <= self.max_simulated_qubits

    def allows_zk(self, n: int, k: int, a: int) -> bool:
        # The widest simulated moment is one gadget on top of the base register.
        width = 5 * n if a >= 2 else 3 * n
        if width > self.max_simulated_qubits:
            return False
        return any(entry.covers(n, k) for entry in self.zk_verify)

    def to_dict(self) -> dict:
        return {
            "max_simulated_qubits": self.max_simulated_qubits,
            "teleport_max_n": self.teleport_max_n,
            "zk_verify": [{"max_n": e.max_n, "max_k": e.max_k} for e in self.zk_verify],
        }


def get_envelope_path_from_env(env: Optional[Mapping[str, str]] = None) -> Path:
    """
    Resolve the envelope file.

    Precedence:
      1. TP_ENVELOPE
      2. data/envelope.json under the project root
    """
    env_map = env if env is not None else os.environ
    raw_path = (env_map.get(ENVELOPE_ENV_VAR) or "").strip()
    if raw_path:
        return Path(raw_path)
    return PROJECT_ROOT / DEFAULT_ENVELOPE_PATH


def get_worker_count_from_env(env: Optional[Mapping[str, str]] = None) -> int:
    env_map = env if env is not None else os.environ
    raw_value = (env_map.get(WORKER_COUNT_ENV_VAR) or "").strip()
    if not raw_value:
        return DEFAULT_WORKER_COUNT
    try:
        workers = int(raw_value)
    except ValueError as exc:
        raise EnvelopeConfigError(f"{WORKER_COUNT_ENV_VAR} must be an integer.") from exc
    if workers <= 0:
        raise EnvelopeConfigError(f"{WORKER_COUNT_ENV_VAR} must be greater than zero.")
    return workers


def _positive_int(data: Mapping, key: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
        raise EnvelopeConfigError(f"Envelope field '{key}' must be a positive integer, got {value!r}.")
    return value


def parse_envelope(data: Mapping, source: Optional[str] = None) -> Envelope:
    if not isinstance(data, Mapping):
        raise EnvelopeConfigError("Envelope must be a JSON object.")
    entries = data.get("zk_verify") or []
    if not isinstance(entries, list):
        raise EnvelopeConfigError("Envelope field 'zk_verify' must be a list.")
    zk_verify = []
    for entry in entries:
        if not isinstance(entry, Mapping):
            raise EnvelopeConfigError(f"zk_verify entries must be objects, got {entry!r}.")
        zk_verify.append(ZkVerifyEntry(max_n=_positive_int(entry, "max_n"), max_k=_positive_int(entry, "max_k")))
    return Envelope(
        max_simulated_qubits=_positive_int(data, "max_simulated_qubits"),
        teleport_max_n=_positive_int(data, "teleport_max_n"),
        zk_verify=tuple(zk_verify),
        source=source,
    )


def load_envelope(path: Optional[Path] = None, env: Optional[Mapping[str, str]] = None) -> Envelope:
    path = Path(path) if path is not None else get_envelope_path_from_env(env)
    try:
        with path.open("r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError as exc:
        raise EnvelopeConfigError(f"Envelope file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise EnvelopeConfigError(f"Envelope file {path} is not valid JSON: {exc}") from exc
    envelope = parse_envelope(data, source=str(path))
    logger.debug("Loaded envelope from %s: %s", path, envelope.to_dict())
    return envelope
