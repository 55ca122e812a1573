"""
Desk-scale cost table: standard vs precomputation ledgers per problem size,
with power-law fits per column.

Sizes inside the verification envelope are simulated and checked against
direct application; larger sizes run on symbolic states (ledger-only).
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from constants.report_constants import PHASE_CONSUME, PHASE_PREP, PHASE_STANDARD
from models.cost_report import FIT_COLUMNS, CostTableEntry, CostTableReport
from models.ledger import GateCountLedger, ScalingFit, TaskInstance
from services.cost_model_service import clifford_standard_cost, fit_scaling, standard_cost_zk
from services.envelope import Envelope
from services.errors import UsageError
from services.pauli_service import random_clifford_circuit
from services.simulator_service import random_product_state, symbolic_state
from services.teleport_service import teleport_clifford
from services.zk_protocol_service import check_stop_level, run_protocol
from services.zk_service import random_zk

logger = logging.getLogger(__name__)

FAMILY_ZK = "zk"
FAMILY_CLIFFORD = "clifford"
FAMILIES = (FAMILY_ZK, FAMILY_CLIFFORD)

# Sample = (standard, consume, prep, resource_width, classical_ops, trace_distance or None)
Sample = Tuple[GateCountLedger, GateCountLedger, GateCountLedger, int, int, Optional[float]]


def size_rng(seed: int, n: int) -> np.random.Generator:
    return np.random.default_rng([seed, n])


def _zk_sample(n: int, k: int, a: int, seed: int, verify: bool) -> Sample:
    rng = size_rng(seed, n)
    u = random_zk(n, k, rng)
    input_state = random_product_state(n, rng) if verify else symbolic_state(n)
    resource, result = run_protocol(u, input_state, rng, a)
    return (
        standard_cost_zk(u),
        result.consume_ledger,
        result.prep_ledger,
        resource.staged_width,
        result.classical_op_count,
        result.trace_distance_to_direct,
    )


def _clifford_sample(n: int, seed: int, verify: bool) -> Sample:
    rng = size_rng(seed, n)
    circuit = random_clifford_circuit(n, None, rng)
    input_state = random_product_state(n, rng) if verify else symbolic_state(n)
    run = teleport_clifford(circuit, n, input_state, rng)
    byproduct = run.transcript.byproducts[0]
    # One tableau row is multiplied in per set byproduct bit.
    classical_ops = sum(byproduct.x_bits) + sum(byproduct.z_bits)
    return (
        clifford_standard_cost(circuit, n),
        run.consume_ledger,
        run.prep_ledger,
        run.prep_ledger.peak_width,
        classical_ops,
        run.trace_distance_to_direct,
    )


def _fit_column(points: Sequence[Tuple[float, float]], column: str) -> Optional[ScalingFit]:
    if len(points) < 3 or any(value <= 0 for _, value in points):
        logger.warning("Skipping %s fit: needs three positive points, got %s.", column, list(points))
        return None
    if len({n for n, _ in points}) < 2:
        return None
    return fit_scaling(points)


def _entry(n: int, k: int, a: int, samples: List[Sample], verified: bool) -> CostTableEntry:
    standard, consume, prep, width, _, _ = samples[0]
    distances = [sample[5] for sample in samples if sample[5] is not None]
    mean_totals = {
        PHASE_STANDARD: float(np.mean([s[0].total for s in samples])),
        PHASE_CONSUME: float(np.mean([s[1].total for s in samples])),
        PHASE_PREP: float(np.mean([s[2].total for s in samples])),
        "classical_ops": float(np.mean([s[4] for s in samples])),
    }
    return CostTableEntry(
        n=n,
        k=k,
        a=a,
        standard=standard,
        consume=consume,
        prep=prep,
        resource_width=width,
        classical_ops=mean_totals["classical_ops"],
        verified=verified,
        max_trace_distance=max(distances) if distances else None,
        mean_totals=mean_totals,
    )


def _task_instance(family: str) -> TaskInstance:
    if family == FAMILY_CLIFFORD:
        early = {"x": "Clifford circuit U (tableau and |Γ(U)⟩ prepared offline)"}
        late = {"rho": "input product state |ψ⟩"}
    else:
        early = {"x": "diagonal element u (derivative gadgets staged offline)"}
        late = {"rho": "input product state |ψ⟩", "y": "gadget choice bits derived from outcomes"}
    return TaskInstance(
        early_input=early,
        late_input=late,
        outputs={"z": "transcript and final byproduct", "sigma": "U|ψ⟩ up to global phase"},
    )


def table1_report(
    n_values: Sequence[int],
    k: int,
    a: int,
    seeds: Sequence[int],
    envelope: Optional[Envelope] = None,
    family: str = FAMILY_ZK,
) -> CostTableReport:
    """Per-size ledgers plus fitted exponents for the standard, consume, prep and classical columns."""
    n_values = list(n_values)
    seeds = list(seeds)
    if not n_values:
        raise UsageError("The size range is empty.")
    if not seeds:
        raise UsageError("At least one seed is required.")
    if family not in FAMILIES:
        raise UsageError(f"Unknown family '{family}'; expected one of {FAMILIES}.")
    if family == FAMILY_ZK:
        check_stop_level(k, a)
        if min(n_values) < k:
            raise UsageError(f"Every n must be >= k={k}, got {min(n_values)}.")
    elif min(n_values) < 1:
        raise UsageError("Every n must be >= 1.")

    report = CostTableReport(family=family, k=k, a=a, seeds=seeds, task=_task_instance(family))

    def sample(n: int, seed: int, verify: bool) -> Sample:
        if family == FAMILY_ZK:
            return _zk_sample(n, k, a, seed, verify)
        return _clifford_sample(n, seed, verify)

    def allows(n: int) -> bool:
        if envelope is None:
            return False
        return envelope.allows_zk(n, k, a) if family == FAMILY_ZK else envelope.allows_teleport(n)

    for n in n_values:
        verify = allows(n)
        if not verify:
            logger.warning("n=%s is outside the verification envelope; row is ledger-only.", n)
        samples = [sample(n, seed, verify) for seed in seeds]
        report.entries.append(_entry(n, k, a, samples, verify))
        logger.info("Cost row n=%s k=%s a=%s verified=%s.", n, k, a, verify)

    for column in FIT_COLUMNS:
        report.fits[column] = _fit_column(column_points(report, column), column)
    return report


def column_points(report: CostTableReport, column: str) -> List[Tuple[int, float]]:
    if column not in FIT_COLUMNS:
        raise UsageError(f"Unknown column '{column}'.")
    return [(entry.n, entry.mean_totals[column]) for entry in report.entries]


def fit_summary(report: CostTableReport) -> Dict[str, Optional[float]]:
    return {column: (fit.exponent if fit is not None else None) for column, fit in report.fits.items()}
