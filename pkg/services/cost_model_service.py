"""
Gate-count ledgers.

Counting rules:
  - Gates are layered greedily: a gate lands one layer after the latest
    layer of any qubit it touches. Measurements take a layer too.
  - A qubit is live from layer 1 when it is part of the initial register,
    otherwise from its first use, and stays live until its measurement (or the end).
    MCZ scratch ancillas end with their uncompute measurement.
  - identity_ticks = live qubit-layers minus active qubit-layers.
  - MCZ gates are expanded with `decompose_mcz` before counting.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from constants.report_constants import LEDGER_PHASES, PHASE_CONSUME, PHASE_PREP
from models.gate import Gate, GateTape
from models.ledger import GateCountLedger, ScalingFit
from models.zk_element import ZkElement
from services.errors import SimulatorInternalError, UsageError
from services.zk_service import zk_to_circuit


CLIFFORD_1Q_NAMES = ("H", "S", "SDG", "X", "Z", "I")
CLIFFORD_2Q_NAMES = ("CNOT", "CZ")
T_NAMES = ("T", "TDG")
MARKER_NAMES = ("ALLOC",)
MEASURE_NAME = "MEASURE"


# ------------------------------------------------------------------ #
#  Multi-controlled Z
# ------------------------------------------------------------------ #
def _ccz(a: int, b: int, c: int) -> List[Gate]:
    """CCZ from its phase polynomial: T on a, b, c and a^b^c; T† on the pairwise parities."""
    return [
        Gate.of("CNOT", b, c),
        Gate.of("TDG", c),
        Gate.of("CNOT", a, c),
        Gate.of("T", c),
        Gate.of("CNOT", b, c),
        Gate.of("TDG", c),
        Gate.of("CNOT", a, c),
        Gate.of("T", b),
        Gate.of("T", c),
        Gate.of("CNOT", a, b),
        Gate.of("T", a),
        Gate.of("TDG", b),
        Gate.of("CNOT", a, b),
    ]


def _logical_and(c0: int, c1: int, target: int) -> List[Gate]:
    """
    |c0 c1⟩|0⟩ -> |c0 c1⟩|c0·c1⟩ with 4 T gates. The relative-phase Toffoli
    leaves a phase i on c0·c1, which the closing S† on the target removes.
    Only valid for a target that starts in |0⟩.
    """
    return [
        Gate.of("H", target),
        Gate.of("T", target),
        Gate.of("CNOT", c1, target),
        Gate.of("TDG", target),
        Gate.of("CNOT", c0, target),
        Gate.of("T", target),
        Gate.of("CNOT", c1, target),
        Gate.of("TDG", target),
        Gate.of("H", target),
        Gate.of("SDG", target),
    ]


def mcz_ancilla_count(j: int) -> int:
    return j - 2 if j > 3 else 0


def _and_rungs(j: int) -> List[Tuple[int, int, int]]:
    """(left input, right input, ancilla) per ladder rung, in compute order."""
    controls = list(range(j - 1))
    ancillas = list(range(j, j + mcz_ancilla_count(j)))
    rungs = [(controls[0], controls[1], ancillas[0])]
    for index in range(1, len(ancillas)):
        rungs.append((ancillas[index - 1], controls[index + 1], ancillas[index]))
    return rungs


def mcz_and_ladder(j: int) -> List[Gate]:
    """Unitary half of `decompose_mcz` for j > 3: the AND ladder and the CZ onto the target."""
    if j <= 3:
        raise UsageError(f"The AND ladder needs j > 3, got {j}.")
    rungs = _and_rungs(j)
    gates: List[Gate] = []
    for left, right, ancilla in rungs:
        gates.extend(_logical_and(left, right, ancilla))
    gates.append(Gate.of("CZ", rungs[-1][2], j - 1))
    return gates


def mcz_uncompute_steps(j: int) -> List[Tuple[int, Tuple[int, int]]]:
    """(ancilla, fixup pair) in uncompute order: H and measure the ancilla, CZ the pair when it reads 1."""
    return [(ancilla, (left, right)) for left, right, ancilla in reversed(_and_rungs(j))]


def decompose_mcz(j: int) -> List[Gate]:
    """
    MCZ on qubits 0..j-1 over Clifford+T. For j > 3, ancillas j..2j-3 start
    in |0⟩: an AND ladder computes the conjunction of the j-1 controls, a CZ
    hits the target, and each rung is undone by an X-basis measurement of its
    ancilla plus a classically controlled CZ on the rung's inputs. The fixup
    CZ is counted as always applied.
    T-count: 0, 0, 7 and 4(j-2) for j = 1, 2, 3 and j > 3.
    """
    if j < 1:
        raise UsageError(f"MCZ needs at least one qubit, got {j}.")
    if j == 1:
        return [Gate.of("Z", 0)]
    if j == 2:
        return [Gate.of("CZ", 0, 1)]
    if j == 3:
        return _ccz(0, 1, 2)

    gates = mcz_and_ladder(j)
    for ancilla, pair in mcz_uncompute_steps(j):
        gates.extend([Gate.of("H", ancilla), Gate.of(MEASURE_NAME, ancilla), Gate.of("CZ", *pair)])
    return gates


def t_count(gates: Iterable[Gate]) -> int:
    return sum(1 for gate in gates if gate.name in T_NAMES)


# ------------------------------------------------------------------ #
#  Counting
# ------------------------------------------------------------------ #
def _expand_mcz(gates: Sequence[Gate]) -> List[Gate]:
    next_label = 1 + max((q for gate in gates for q in gate.qubits), default=-1)
    expanded: List[Gate] = []
    for gate in gates:
        if gate.name != "MCZ":
            expanded.append(gate)
            continue
        j = len(gate.qubits)
        ancillas = list(range(next_label, next_label + mcz_ancilla_count(j)))
        next_label += len(ancillas)
        mapping = list(gate.qubits) + ancillas
        expanded.extend(Gate(name=g.name, qubits=tuple(mapping[q] for q in g.qubits)) for g in decompose_mcz(j))
    return expanded


def count_circuit(
    gates: Iterable[Gate],
    width: int = 0,
    live_from_start: Optional[Iterable[int]] = None,
) -> GateCountLedger:
    """Ledger of a gate/marker sequence; labels below `width` (or in `live_from_start`) are live from layer 1."""
    expanded = _expand_mcz(list(gates))
    initial = set(range(width)) if live_from_start is None else set(live_from_start)

    counts = {"clifford_1q": 0, "clifford_2q": 0, "t_count": 0, "measurements": 0}
    last_layer: Dict[int, int] = {}
    first_layer: Dict[int, int] = {}
    measured_at: Dict[int, int] = {}
    active = 0
    depth = 0
    for gate in expanded:
        name = gate.name
        if name in MARKER_NAMES:
            continue
        if name in CLIFFORD_1Q_NAMES:
            counts["clifford_1q"] += 1
        elif name in CLIFFORD_2Q_NAMES:
            counts["clifford_2q"] += 1
        elif name in T_NAMES:
            counts["t_count"] += 1
        elif name == MEASURE_NAME:
            counts["measurements"] += 1
        else:
            raise UsageError(f"Cannot count unknown gate '{name}'.")

        layer = 1 + max(last_layer.get(q, 0) for q in gate.qubits)
        for q in gate.qubits:
            last_layer[q] = layer
            first_layer.setdefault(q, layer)
            if name == MEASURE_NAME:
                measured_at[q] = layer
        active += len(gate.qubits)
        depth = max(depth, layer)

    if depth == 0:
        return GateCountLedger(**counts)

    labels = set(first_layer) | initial
    occupancy = np.zeros(depth + 2, dtype=np.int64)
    live_total = 0
    for label in labels:
        start = 1 if label in initial else first_layer[label]
        end = measured_at.get(label, depth)
        live_total += end - start + 1
        occupancy[start] += 1
        occupancy[end + 1] -= 1
    peak = int(np.cumsum(occupancy).max())

    return GateCountLedger(
        identity_ticks=live_total - active,
        depth=depth,
        peak_width=peak,
        analytic_depth=depth,
        **counts,
    )


def ledgers_by_phase(tape: GateTape, inputs: Iterable[int] = ()) -> Dict[str, GateCountLedger]:
    """One ledger per phase. `inputs` are the late-input qubits, live from the start of consumption."""
    inputs = list(inputs)
    return {
        phase: count_circuit(tape.gates(phase), live_from_start=inputs if phase == PHASE_CONSUME else ())
        for phase in LEDGER_PHASES
    }


def check_phase_attribution(tape: GateTape) -> Dict[str, int]:
    """Events per ledger phase; every event must sit in exactly one phase and the sum must match the tape counter."""
    counts = tape.phase_counts()
    stray = sorted(set(counts) - set(LEDGER_PHASES))
    if stray:
        raise SimulatorInternalError(f"Tape events carry unknown phases {stray}.")
    if sum(counts.values()) != tape.total_events:
        raise SimulatorInternalError(
            f"Phase ledgers hold {sum(counts.values())} events but the tape recorded {tape.total_events}."
        )
    return counts


def standard_cost_zk(u: ZkElement) -> GateCountLedger:
    """Direct application of u: one (decomposed) MCZ per monomial, qubits idle from the start."""
    gates, _ = zk_to_circuit(u)
    return count_circuit(gates, u.n)


def clifford_standard_cost(circuit: Sequence[Gate], n: int) -> GateCountLedger:
    """Direct application of a Clifford circuit on n qubits idle from the start."""
    return count_circuit(circuit, n)


def precomputation_cost(run, inputs: Iterable[int] = ()) -> Tuple[GateCountLedger, GateCountLedger]:
    """(consume, prep) ledgers for a protocol result or a recorded gate tape."""
    if isinstance(run, GateTape):
        ledgers = ledgers_by_phase(run, inputs)
        return ledgers[PHASE_CONSUME], ledgers[PHASE_PREP]
    try:
        return run.consume_ledger, run.prep_ledger
    except AttributeError as exc:
        raise UsageError(f"Cannot split costs of {type(run).__name__}.") from exc


# ------------------------------------------------------------------ #
#  Scaling fits
# ------------------------------------------------------------------ #
def fit_scaling(points: Sequence[Tuple[float, float]]) -> ScalingFit:
    """Least squares of log(count) on log(n); the slope is the exponent."""
    points = tuple((float(n), float(count)) for n, count in points)
    if len(points) < 3:
        raise UsageError(f"A scaling fit needs at least three points, got {len(points)}.")
    if any(n <= 0 or count <= 0 for n, count in points):
        raise UsageError("Scaling fit points must be positive.")
    xs = np.log([n for n, _ in points])
    ys = np.log([count for _, count in points])
    if np.ptp(xs) == 0:
        raise UsageError("Scaling fit needs at least two distinct sizes.")
    result = stats.linregress(xs, ys)
    r_squared = float(min(1.0, max(0.0, result.rvalue ** 2)))
    return ScalingFit(
        exponent=float(result.slope),
        intercept=float(result.intercept),
        r_squared=r_squared,
        points=points,
    )
