"""
Self-checks run by the `selftest` subcommand.

Each check returns a list of failure messages; an empty list means it passed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from models.pauli_string import PauliString
from services.dme_service import calibrate_budget_constant, default_calibration_probes
from services.errors import VerificationError
from services.pauli_service import pauli_to_matrix
from services.teleport_service import verify_selective_tables
from services.zk_service import random_zk, zk_conjugate_by_x, zk_to_matrix

logger = logging.getLogger(__name__)

COMMUTATION_MAX_N = 5
COMMUTATION_MAX_K = 4
DENSE_MAX_N = 4
DENSE_TOLERANCE = 1e-12
CALIBRATION_EPS = 0.1


@dataclass
class SelftestReport:
    failures: Dict[str, List[str]] = field(default_factory=dict)
    budget_constant: Optional[float] = None

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failures": {name: list(messages) for name, messages in self.failures.items()},
            "budget_constant": self.budget_constant,
        }


def check_selective_tables(tables: Optional[dict] = None) -> List[str]:
    return verify_selective_tables(tables)


def check_commutation_suite(rng: np.random.Generator, samples: int = 1000) -> List[str]:
    """Random (g, s): level of G' drops below k, and X_s G X_s G† = G', G X_s = X_s G' G densely."""
    failures: List[str] = []
    for index in range(samples):
        n = int(rng.integers(1, COMMUTATION_MAX_N + 1))
        k = int(rng.integers(1, min(COMMUTATION_MAX_K, n) + 1))
        g = random_zk(n, k, rng)
        s = [q for q in range(n) if rng.integers(2)]
        derived = zk_conjugate_by_x(g, s)
        if derived.level > max(k - 1, 0):
            failures.append(f"sample {index}: level {derived.level} > {k - 1} for g={g.to_text()} s={s}")
            continue
        if n > DENSE_MAX_N:
            continue
        x_s = pauli_to_matrix(PauliString.x_on(n, s))
        g_dense = np.diag(zk_to_matrix(g)).astype(complex)
        derived_dense = np.diag(zk_to_matrix(derived)).astype(complex)
        if np.max(np.abs(x_s @ g_dense @ x_s @ g_dense.conj().T - derived_dense)) > DENSE_TOLERANCE:
            failures.append(f"sample {index}: X_s G X_s G† != G' for g={g.to_text()} s={s}")
        elif np.max(np.abs(g_dense @ x_s - x_s @ derived_dense @ g_dense)) > DENSE_TOLERANCE:
            failures.append(f"sample {index}: G X_s != X_s G' G for g={g.to_text()} s={s}")
    return failures


def check_dme_calibration(rng: np.random.Generator, eps: float = CALIBRATION_EPS) -> Tuple[List[str], Optional[float]]:
    try:
        constant = calibrate_budget_constant(default_calibration_probes(rng), eps)
    except VerificationError as exc:
        return [str(exc)], None
    return [], constant


def run_selftest(
    seed: int,
    tables: Optional[dict] = None,
    samples: int = 1000,
    eps: float = CALIBRATION_EPS,
) -> SelftestReport:
    rng = np.random.default_rng(seed)
    report = SelftestReport()
    report.failures["selective_tables"] = check_selective_tables(tables)
    report.failures["commutation"] = check_commutation_suite(rng, samples)
    report.failures["dme_calibration"], report.budget_constant = check_dme_calibration(rng, eps)
    for name, messages in report.failures.items():
        logger.info("Selftest %s: %s", name, "ok" if not messages else f"{len(messages)} failure(s)")
    return report
