"""
Teleportation gadgets: Bell pairs, gate teleportation and the three selective gadgets.

Bell measurement on a pair (c, t): CNOT c->t, H on c, Z-measure both.
The control bit is the Z part of the byproduct and the target bit its X part,
so the teleported qubit carries X^x Z^z |ψ⟩.

Selective gadgets run one copy of the single-qubit wiring per input qubit,
all sharing the choice bit. The choice only changes measurement bases.
Outcome -> byproduct rules are frozen below and re-derived by
`derive_selective_tables` from exhaustive branch enumeration.
"""

from __future__ import annotations

import copy
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from constants.report_constants import PHASE_CONSUME, PHASE_PREP
from constants.sim_constants import BASIS_X, BASIS_Z, DIAGONAL_GATES, INITIAL_PLUS, INITIAL_ZERO
from models.clifford_tableau import CliffordTableau
from models.gate import Gate, GateTape
from models.pauli_string import PauliString
from models.resource_state import ResourceState
from models.statevector import MeasurementOutcome, Statevector
from models.teleport_run import TeleportRun
from models.transcript import Transcript
from services.cost_model_service import count_circuit
from services.density_matrix_service import from_statevector, partial_trace
from services.errors import UsageError
from services.pauli_service import factorize_correction, pauli_dagger, tableau_from_circuit
from services.simulator_service import (
    allocate_register,
    apply_circuit,
    apply_circuit_to_vector,
    apply_gate,
    apply_pauli,
    combine_states,
    empty_state,
    measure_qubit,
    phase_scope,
    postselect_qubit,
    product_state,
    pure_trace_distance,
    state_vector,
)

logger = logging.getLogger(__name__)

CHOICE_A = 0
CHOICE_B = 1

# Destination gadget: one source onto either destination.
SELECTIVE_DESTINATION_TABLE: Dict[int, dict] = {
    CHOICE_A: {
        "bases": {"source": BASIS_Z, "ancilla": BASIS_X},
        "output": "dest_a",
        "byproduct": {"x": "source", "z": "ancilla"},
    },
    CHOICE_B: {
        "bases": {"source": BASIS_X, "ancilla": BASIS_Z},
        "output": "dest_b",
        "byproduct": {"x": "ancilla", "z": "source"},
    },
}

# Source gadget: either source onto one destination.
SELECTIVE_SOURCE_TABLE: Dict[int, dict] = {
    CHOICE_A: {
        "bases": {"src_a": BASIS_X, "src_b": BASIS_Z},
        "output": "src_a",
        "byproduct": {"x": "src_b", "z": "src_a"},
    },
    CHOICE_B: {
        "bases": {"src_a": BASIS_Z, "src_b": BASIS_X},
        "output": "src_b",
        "byproduct": {"x": "src_a", "z": "src_b"},
    },
}

# Gate gadget: output = P1 · U_choice · P2 |ψ⟩.
SELECTIVE_GATE_TABLE: Dict[int, dict] = {
    CHOICE_A: {
        "bases": {"psi": BASIS_Z, "a0": BASIS_X, "a1": BASIS_X, "a2": BASIS_Z},
        "p1": {"x": "a2", "z": "a1"},
        "p2": {"x": "psi", "z": "a0"},
    },
    CHOICE_B: {
        "bases": {"psi": BASIS_X, "a0": BASIS_Z, "a1": BASIS_Z, "a2": BASIS_X},
        "p1": {"x": "a1", "z": "a2"},
        "p2": {"x": "a0", "z": "psi"},
    },
}


def frozen_tables() -> Dict[str, Dict[int, dict]]:
    return {
        "destination": copy.deepcopy(SELECTIVE_DESTINATION_TABLE),
        "source": copy.deepcopy(SELECTIVE_SOURCE_TABLE),
        "gate": copy.deepcopy(SELECTIVE_GATE_TABLE),
    }


# ------------------------------------------------------------------ #
#  Outcome sources
# ------------------------------------------------------------------ #
class OutcomeSource:
    """Decides measurement outcomes; `role`/`index` name the wire inside a gadget."""

    def measure(self, state: Statevector, qubit: int, basis: str, role: str, index: int) -> MeasurementOutcome:
        raise NotImplementedError


@dataclass
class SampledOutcomes(OutcomeSource):
    rng: np.random.Generator

    def measure(self, state: Statevector, qubit: int, basis: str, role: str, index: int) -> MeasurementOutcome:
        outcome, _ = measure_qubit(state, qubit, basis, self.rng)
        return outcome


@dataclass
class ForcedOutcomes(OutcomeSource):
    """Post-selects the outcome stored under (role, index); tracks the branch probability."""

    bits: Dict[Tuple[str, int], int]
    probability: float = 1.0

    def measure(self, state: Statevector, qubit: int, basis: str, role: str, index: int) -> MeasurementOutcome:
        bit = self.bits[(role, index)]
        probability, _ = postselect_qubit(state, qubit, basis, bit)
        self.probability *= probability
        return MeasurementOutcome(qubit=qubit, basis=basis, bit=bit)


def _outcome_source(rng) -> OutcomeSource:
    return rng if isinstance(rng, OutcomeSource) else SampledOutcomes(rng=rng)


def _circuit_width(gates: Sequence[Gate]) -> int:
    return max((q + 1 for gate in gates for q in gate.qubits), default=0)


def _is_diagonal(gates: Sequence[Gate]) -> bool:
    return all(gate.name in DIAGONAL_GATES for gate in gates)


# ------------------------------------------------------------------ #
#  Bell pairs and gate teleportation
# ------------------------------------------------------------------ #
def _prepare_bell_pairs_into(state: Statevector, count: int) -> List[Tuple[int, int]]:
    if count < 1:
        raise UsageError(f"count must be >= 1, got {count}.")
    pairs = []
    with phase_scope(state, PHASE_PREP):
        for _ in range(count):
            first, second = allocate_register(state, 2, INITIAL_PLUS + INITIAL_ZERO)
            apply_gate(state, "CNOT", [first, second])
            pairs.append((first, second))
    return pairs


def prepare_bell_pairs(
    count: int,
    tape: Optional[GateTape] = None,
    symbolic: bool = False,
) -> Tuple[Statevector, List[Tuple[int, int]]]:
    """`count` independent (|00⟩+|11⟩)/√2 pairs."""
    state = empty_state(tape, symbolic)
    pairs = _prepare_bell_pairs_into(state, count)
    return state, pairs


def prepare_gate_resource(
    u_circuit: Sequence[Gate],
    n: int,
    tape: Optional[GateTape] = None,
    unitary_tag: str = "U",
    symbolic: bool = False,
) -> ResourceState:
    """|Γ(U)⟩: n Bell pairs with U applied to the second qubit of each pair."""
    u_circuit = list(u_circuit)
    if _circuit_width(u_circuit) > n:
        raise UsageError(f"Circuit acts on {_circuit_width(u_circuit)} qubits but n={n}.")
    state, pairs = prepare_bell_pairs(n, tape, symbolic)
    input_half = [first for first, _ in pairs]
    output_half = [second for _, second in pairs]
    with phase_scope(state, PHASE_PREP):
        apply_circuit(state, u_circuit, output_half)
    return ResourceState(state=state, n=n, input_half=input_half, output_half=output_half, unitary_tag=unitary_tag)


def bell_measure(
    state: Statevector,
    pairs: Sequence[Tuple[int, int]],
    rng,
    transcript: Optional[Transcript] = None,
) -> Tuple[List[Tuple[int, int]], Statevector]:
    """Measure each pair in the Bell basis; returns (x_i, z_i) per pair."""
    labels = [label for pair in pairs for label in pair]
    state.positions(labels)
    outcomes_source = _outcome_source(rng)
    bits = []
    with phase_scope(state, PHASE_CONSUME):
        for index, (control, target) in enumerate(pairs):
            apply_gate(state, "CNOT", [control, target])
            apply_gate(state, "H", [control])
            z_outcome = outcomes_source.measure(state, control, BASIS_Z, "control", index)
            x_outcome = outcomes_source.measure(state, target, BASIS_Z, "target", index)
            if transcript is not None:
                transcript.outcomes.extend([z_outcome, x_outcome])
            bits.append((x_outcome.bit, z_outcome.bit))
    return bits, state


def gate_teleport(
    input_state: Statevector,
    resource: ResourceState,
    u_tableau: Optional[CliffordTableau],
    rng,
) -> Tuple[Statevector, Transcript]:
    """
    Teleport `input_state` through |Γ(U)⟩. Without a tableau the output is U·P|ψ⟩;
    with one, U P† U† is applied so the output is U|ψ⟩ up to global phase.
    The returned state's live qubits are the output register in input order.
    """
    if input_state.width != resource.n:
        raise UsageError(f"Input width {input_state.width} does not match resource n={resource.n}.")
    if u_tableau is not None and u_tableau.n != resource.n:
        raise UsageError(f"Tableau width {u_tableau.n} does not match resource n={resource.n}.")

    state, label_map = combine_states(input_state, resource.state)
    output = [label_map[label] for label in resource.output_half]
    pairs = list(zip(input_state.live_qubits, [label_map[label] for label in resource.input_half]))

    transcript = Transcript()
    bits, state = bell_measure(state, pairs, rng, transcript)
    byproduct = PauliString.from_bits([x for x, _ in bits], [z for _, z in bits])
    transcript.byproducts.append(byproduct)

    if u_tableau is not None:
        correction = pauli_dagger(factorize_correction(u_tableau, byproduct.x_bits, byproduct.z_bits))
        with phase_scope(state, PHASE_CONSUME):
            apply_pauli(state, correction, output)
    return state, transcript


def teleport_clifford(
    circuit: Sequence[Gate],
    n: int,
    input_state: Statevector,
    rng,
) -> TeleportRun:
    """
    Precompute |Γ(U)⟩ for a Clifford circuit, teleport `input_state` through it
    and correct. A symbolic input gives a ledger-only run.
    """
    circuit = list(circuit)
    tableau = tableau_from_circuit(circuit, n)
    tape = GateTape()
    resource = prepare_gate_resource(circuit, n, tape=tape, symbolic=input_state.symbolic)
    input_state.tape = None
    state, transcript = gate_teleport(input_state, resource, tableau, rng)
    output = list(state.live_qubits)

    run = TeleportRun(
        n=n,
        state=state,
        transcript=transcript,
        consume_ledger=count_circuit(tape.gates(PHASE_CONSUME), live_from_start=input_state.live_qubits),
        prep_ledger=count_circuit(tape.gates(PHASE_PREP)),
        output=output,
    )
    if not input_state.symbolic:
        expected = apply_circuit_to_vector(state_vector(input_state, input_state.live_qubits), circuit)
        run.trace_distance_to_direct = pure_trace_distance(expected, state_vector(state, output))
    return run


# ------------------------------------------------------------------ #
#  Selective destination / source
# ------------------------------------------------------------------ #
def allocate_destination_ancillas(state: Statevector) -> Tuple[int, int, int]:
    """Fresh (dest_a |+⟩, dest_b |+⟩, ancilla |0⟩) for selective destination teleportation."""
    dest_a, dest_b, ancilla = allocate_register(state, 3, INITIAL_PLUS + INITIAL_PLUS + INITIAL_ZERO)
    return dest_a, dest_b, ancilla


def _pauli_from_roles(rule: Dict[str, str], bits: Dict[str, int]) -> PauliString:
    return PauliString.from_bits([bits[rule["x"]]], [bits[rule["z"]]])


def selective_destination_teleport(
    state: Statevector,
    source: int,
    dest_a: int,
    dest_b: int,
    ancilla: int,
    choice: int,
    rng,
    table: Optional[Dict[int, dict]] = None,
) -> Tuple[Statevector, PauliString, int]:
    """Move the source qubit onto dest_a (choice A) or dest_b (choice B), up to a Pauli."""
    table = table or SELECTIVE_DESTINATION_TABLE
    rules = table[choice]
    outcomes_source = _outcome_source(rng)
    with phase_scope(state, PHASE_CONSUME):
        apply_gate(state, "CNOT", [source, ancilla])
        apply_gate(state, "CNOT", [dest_a, source])
        apply_gate(state, "CNOT", [dest_b, ancilla])
        bits = {}
        for role, label in (("source", source), ("ancilla", ancilla)):
            bits[role] = outcomes_source.measure(state, label, rules["bases"][role], role, 0).bit
    chosen = dest_a if rules["output"] == "dest_a" else dest_b
    return state, _pauli_from_roles(rules["byproduct"], bits), chosen


def selective_source_teleport(
    state: Statevector,
    src_a: int,
    src_b: int,
    dest: int,
    choice: int,
    rng,
    table: Optional[Dict[int, dict]] = None,
) -> Tuple[Statevector, PauliString]:
    """Move src_a (choice A) or src_b (choice B) onto `dest` (fresh |0⟩), up to a Pauli."""
    table = table or SELECTIVE_SOURCE_TABLE
    rules = table[choice]
    outcomes_source = _outcome_source(rng)
    with phase_scope(state, PHASE_CONSUME):
        apply_gate(state, "CNOT", [src_a, dest])
        apply_gate(state, "CNOT", [src_b, dest])
        bits = {}
        for role, label in (("src_a", src_a), ("src_b", src_b)):
            bits[role] = outcomes_source.measure(state, label, rules["bases"][role], role, 0).bit
    return state, _pauli_from_roles(rules["byproduct"], bits)


# ------------------------------------------------------------------ #
#  Selective gate teleportation
# ------------------------------------------------------------------ #
@dataclass
class SelectiveGateAncillas:
    """The four per-qubit ancilla registers of one gate gadget group."""

    a0: List[int]
    a1: List[int]
    a2: List[int]
    out: List[int]


@dataclass
class SelectiveGateStep:
    output: List[int]
    p1: PauliString
    p2: PauliString
    outcomes: List[MeasurementOutcome] = field(default_factory=list)


def _check_selective_unitaries(width: int, ua: Sequence[Gate], ub: Sequence[Gate]) -> None:
    if _circuit_width(ua) > width or _circuit_width(ub) > width:
        raise UsageError(f"Selective unitaries must act on at most {width} qubits.")


def _allocate_gate_ancillas(state: Statevector, width: int) -> SelectiveGateAncillas:
    with phase_scope(state, PHASE_PREP):
        ancillas = SelectiveGateAncillas(
            a0=allocate_register(state, width, INITIAL_ZERO * width),
            a1=allocate_register(state, width, INITIAL_PLUS * width),
            a2=allocate_register(state, width, INITIAL_PLUS * width),
            out=allocate_register(state, width, INITIAL_ZERO * width),
        )
        for q in range(width):
            apply_gate(state, "CNOT", [ancillas.a2[q], ancillas.a0[q]])
    return ancillas


def _apply_selected_unitaries(
    state: Statevector,
    ancillas: SelectiveGateAncillas,
    ua: Sequence[Gate],
    ub: Sequence[Gate],
) -> None:
    apply_circuit(state, ua, ancillas.a1)
    apply_circuit(state, ub, ancillas.a2)
    for a1, a2, out in zip(ancillas.a1, ancillas.a2, ancillas.out):
        apply_gate(state, "CNOT", [a1, out])
        apply_gate(state, "CNOT", [a2, out])


def stage_selective_gate(
    state: Statevector,
    width: int,
    ua: Sequence[Gate],
    ub: Sequence[Gate],
) -> SelectiveGateAncillas:
    """Everything of a gate gadget that does not touch the input; needs diagonal UA and UB."""
    _check_selective_unitaries(width, ua, ub)
    if not (_is_diagonal(ua) and _is_diagonal(ub)):
        raise UsageError("Only diagonal selective unitaries can be staged ahead of the input.")
    ancillas = _allocate_gate_ancillas(state, width)
    with phase_scope(state, PHASE_PREP):
        _apply_selected_unitaries(state, ancillas, ua, ub)
    return ancillas


def run_selective_gate(
    state: Statevector,
    register: Sequence[int],
    ua: Sequence[Gate],
    ub: Sequence[Gate],
    choice: int,
    outcomes_source: OutcomeSource,
    table: Optional[Dict[int, dict]] = None,
) -> SelectiveGateStep:
    """
    One gadget group of 4n ancillas on an existing state. `register` is consumed
    and the returned `output` register holds P1 · U_choice · P2 on it.
    Ancilla-only parts are tagged as preparation when both unitaries are diagonal.
    """
    table = table or SELECTIVE_GATE_TABLE
    rules = table[choice]
    register = list(register)
    width = len(register)
    _check_selective_unitaries(width, ua, ub)
    unchosen = ub if choice == CHOICE_A else ua
    if not _is_diagonal(unchosen):
        raise UsageError("The unselected unitary must be diagonal.")
    offline = PHASE_PREP if _is_diagonal(ua) and _is_diagonal(ub) else PHASE_CONSUME

    ancillas = _allocate_gate_ancillas(state, width)
    with phase_scope(state, PHASE_CONSUME):
        for q in range(width):
            apply_gate(state, "CNOT", [register[q], ancillas.a0[q]])
            apply_gate(state, "CNOT", [ancillas.a1[q], register[q]])
    with phase_scope(state, offline):
        _apply_selected_unitaries(state, ancillas, ua, ub)

    wires = {"psi": register, "a0": ancillas.a0, "a1": ancillas.a1, "a2": ancillas.a2}
    bits: Dict[str, List[int]] = {role: [] for role in wires}
    outcomes: List[MeasurementOutcome] = []
    with phase_scope(state, PHASE_CONSUME):
        for q in range(width):
            for role in ("psi", "a0", "a1", "a2"):
                outcome = outcomes_source.measure(state, wires[role][q], rules["bases"][role], role, q)
                bits[role].append(outcome.bit)
                outcomes.append(outcome)

    p1 = PauliString.from_bits(bits[rules["p1"]["x"]], bits[rules["p1"]["z"]])
    p2 = PauliString.from_bits(bits[rules["p2"]["x"]], bits[rules["p2"]["z"]])
    return SelectiveGateStep(output=ancillas.out, p1=p1, p2=p2, outcomes=outcomes)


def selective_gate_teleport(
    input_state: Statevector,
    ua: Sequence[Gate],
    ub: Sequence[Gate],
    choice: int,
    rng,
    transcript: Optional[Transcript] = None,
) -> Tuple[Statevector, PauliString, PauliString]:
    """Output = P1 · U_choice · P2 |ψ⟩; the input qubits are consumed."""
    if choice not in (CHOICE_A, CHOICE_B):
        raise UsageError(f"choice must be 0 (A) or 1 (B), got {choice}.")
    register = list(input_state.live_qubits)
    step = run_selective_gate(input_state, register, ua, ub, choice, _outcome_source(rng))
    if transcript is not None:
        transcript.outcomes.extend(step.outcomes)
        transcript.byproducts.extend([step.p2, step.p1])
        transcript.choices.append(choice)
    return input_state, step.p1, step.p2


# ------------------------------------------------------------------ #
#  Table derivation by exhaustive branch enumeration
# ------------------------------------------------------------------ #
_PROBES = (
    np.array([1, 0], dtype=complex),
    np.array([1, 1], dtype=complex) / np.sqrt(2),
    np.array([1, 1j], dtype=complex) / np.sqrt(2),
)
_PAULI_1Q = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1], [1, 0]], dtype=complex),
}
# Chosen unitary T·H·T maps no nontrivial Pauli to a Pauli, so (P1, P2) is identifiable.
_PROBE_CHOSEN = [Gate.of("T", 0), Gate.of("H", 0), Gate.of("T", 0)]
_PROBE_UNCHOSEN = [Gate.of("T", 0)]
_PROBE_CHOSEN_MATRIX = (
    np.diag([1, np.exp(1j * np.pi / 4)]) @ (np.array([[1, 1], [1, -1]]) / np.sqrt(2)) @ np.diag([1, np.exp(1j * np.pi / 4)])
)


def _fidelity(vector: np.ndarray, target: np.ndarray) -> float:
    return float(abs(np.vdot(vector, target)) ** 2)


def _single_qubit_vector(state: Statevector, label: int) -> np.ndarray:
    """Pure state of `label` when it is unentangled from the rest."""
    reduced = partial_trace(from_statevector(state), [q for q in state.live_qubits if q != label]).matrix
    eigenvalues, eigenvectors = np.linalg.eigh(reduced)
    return eigenvectors[:, int(np.argmax(eigenvalues))]


def _match_roles(branches: List[Tuple[Dict[str, int], Tuple[int, int]]]) -> Dict[str, Optional[str]]:
    """Find, for each byproduct component, the wire whose bit equals it on every branch."""
    rule: Dict[str, Optional[str]] = {}
    for component, slot in (("x", 0), ("z", 1)):
        matches = [
            role
            for role in branches[0][0]
            if all(bits[role] == pauli_bits[slot] for bits, pauli_bits in branches)
        ]
        rule[component] = matches[0] if len(matches) == 1 else None
    return rule


def _infer_pauli(outputs: List[np.ndarray], expected: List[np.ndarray]) -> Tuple[int, int]:
    for bits, matrix in _PAULI_1Q.items():
        if all(_fidelity(out, matrix @ exp) > 1 - 1e-9 for out, exp in zip(outputs, expected)):
            return bits
    raise UsageError("No single-qubit Pauli explains the branch outputs.")


def _derive_destination(choice: int) -> dict:
    bases = SELECTIVE_DESTINATION_TABLE[choice]["bases"]
    branches = []
    output_role = None
    for source_bit in (0, 1):
        for ancilla_bit in (0, 1):
            forced = {("source", 0): source_bit, ("ancilla", 0): ancilla_bit}
            outputs = []
            for probe in _PROBES:
                state = product_state([probe])
                dest_a, dest_b, ancilla = allocate_destination_ancillas(state)
                state, _, chosen = selective_destination_teleport(
                    state, 0, dest_a, dest_b, ancilla, choice, ForcedOutcomes(bits=forced)
                )
                output_role = "dest_a" if chosen == dest_a else "dest_b"
                outputs.append(_single_qubit_vector(state, chosen))
            pauli_bits = _infer_pauli(outputs, list(_PROBES))
            branches.append(({"source": source_bit, "ancilla": ancilla_bit}, pauli_bits))
    return {"bases": dict(bases), "output": output_role, "byproduct": _match_roles(branches)}


def _derive_source(choice: int) -> dict:
    bases = SELECTIVE_SOURCE_TABLE[choice]["bases"]
    plus = _PROBES[1]
    branches = []
    for bit_a in (0, 1):
        for bit_b in (0, 1):
            forced = {("src_a", 0): bit_a, ("src_b", 0): bit_b}
            outputs = []
            for probe in _PROBES:
                vectors = [probe, plus] if choice == CHOICE_A else [plus, probe]
                state = product_state(vectors)
                (dest,) = allocate_register(state, 1, INITIAL_ZERO)
                state, _ = selective_source_teleport(state, 0, 1, dest, choice, ForcedOutcomes(bits=forced))
                outputs.append(state_vector(state, [dest]))
            pauli_bits = _infer_pauli(outputs, list(_PROBES))
            branches.append(({"src_a": bit_a, "src_b": bit_b}, pauli_bits))
    output_role = "src_a" if choice == CHOICE_A else "src_b"
    return {"bases": dict(bases), "output": output_role, "byproduct": _match_roles(branches)}


def _derive_gate(choice: int) -> dict:
    bases = SELECTIVE_GATE_TABLE[choice]["bases"]
    ua, ub = (_PROBE_CHOSEN, _PROBE_UNCHOSEN) if choice == CHOICE_A else (_PROBE_UNCHOSEN, _PROBE_CHOSEN)
    roles = ("psi", "a0", "a1", "a2")
    p1_branches = []
    p2_branches = []
    for pattern in range(16):
        bits = {role: (pattern >> (3 - i)) & 1 for i, role in enumerate(roles)}
        forced = {(role, 0): bit for role, bit in bits.items()}
        outputs = []
        for probe in _PROBES:
            state = product_state([probe])
            step = run_selective_gate(state, [0], ua, ub, choice, ForcedOutcomes(bits=forced))
            outputs.append(state_vector(state, step.output))
        found = None
        for p1_bits, p1 in _PAULI_1Q.items():
            for p2_bits, p2 in _PAULI_1Q.items():
                expected = [p1 @ _PROBE_CHOSEN_MATRIX @ p2 @ probe for probe in _PROBES]
                if all(_fidelity(out, exp) > 1 - 1e-9 for out, exp in zip(outputs, expected)):
                    found = (p1_bits, p2_bits)
        if found is None:
            raise UsageError(f"No byproduct pair explains gate-gadget branch {bits}.")
        p1_branches.append((bits, found[0]))
        p2_branches.append((bits, found[1]))
    return {"bases": dict(bases), "p1": _match_roles(p1_branches), "p2": _match_roles(p2_branches)}


def derive_selective_tables() -> Dict[str, Dict[int, dict]]:
    """Recompute every outcome -> byproduct rule by walking all single-qubit branches."""
    return {
        "destination": {choice: _derive_destination(choice) for choice in (CHOICE_A, CHOICE_B)},
        "source": {choice: _derive_source(choice) for choice in (CHOICE_A, CHOICE_B)},
        "gate": {choice: _derive_gate(choice) for choice in (CHOICE_A, CHOICE_B)},
    }


def verify_selective_tables(tables: Optional[Dict[str, Dict[int, dict]]] = None) -> List[str]:
    """Differences between the given (default: frozen) tables and freshly derived ones."""
    tables = tables if tables is not None else frozen_tables()
    derived = derive_selective_tables()
    mismatches = []
    for gadget, by_choice in derived.items():
        for choice, rules in by_choice.items():
            if tables.get(gadget, {}).get(choice) != rules:
                mismatches.append(f"{gadget}[choice={choice}]: frozen={tables.get(gadget, {}).get(choice)} derived={rules}")
    if mismatches:
        logger.warning("Selective byproduct tables disagree with derivation (%s mismatches).", len(mismatches))
    return mismatches
