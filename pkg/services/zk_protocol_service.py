"""
Precomputed application of diagonal hierarchy unitaries.

Frame tracking: after the base teleportation the state is F · D · U|ψ⟩ with
F a Pauli frame and D a pending diagonal correction. Conjugating a diagonal C
through the frame gives C F = F · G'(C, s) · C, where s is the X-support of F
and G'(C, s) = X_s C X_s C† expands into the derivatives of C along the
nonempty subsets of s. Derivatives short enough to be fired by a later
gadget layer are queued per layer; everything else is multiplied into the
residual, whose level is at most k - a. Gadgets run layer by layer in
lexicographic path order.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from itertools import combinations, product
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from constants.report_constants import PHASE_CONSUME, PHASE_PREP
from models.gate import GateTape
from models.layered_resource import GadgetGroup, LayeredResource, Path, ProtocolResult
from models.ledger import ClassicalOpCounter
from models.pauli_string import PauliString
from models.statevector import Statevector
from models.transcript import Transcript
from models.zk_element import Monomial, ZkElement
from services.cost_model_service import check_phase_attribution, count_circuit
from services.errors import ResourceConsumedError, SimulatorInternalError, UsageError
from services.pauli_service import pauli_dagger, pauli_multiply
from services.simulator_service import (
    allocate_register,
    apply_gate,
    apply_mcz,
    apply_pauli,
    apply_zk,
    combine_states,
    empty_state,
    phase_scope,
    pure_trace_distance,
    release_qubits,
    state_vector,
)
from services.teleport_service import (
    CHOICE_A,
    CHOICE_B,
    SampledOutcomes,
    bell_measure,
    prepare_gate_resource,
    run_selective_gate,
    stage_selective_gate,
)
from services.zk_service import zk_conjugate_by_x, zk_derivative, zk_multiply, zk_to_circuit, zk_to_matrix

logger = logging.getLogger(__name__)


def default_stop_level(k: int) -> int:
    return max(1, k // 2)


def check_stop_level(k: int, a: int) -> None:
    """a = 1 (plain teleportation) is always allowed; otherwise 1 <= a <= k - 1."""
    upper = max(k - 1, 1)
    if not 1 <= a <= upper:
        raise UsageError(f"Stop level a must satisfy 1 <= a <= {upper} for k={k}, got {a}.")


def gadget_paths(n: int, a: int) -> Iterator[Path]:
    for layer in range(1, a):
        yield from product(range(n), repeat=layer)


def candidate_corrections(u: ZkElement, layer: int) -> List[Tuple[Path, ZkElement]]:
    """Derivatives of u along every index path of length `layer`, in lexicographic order."""
    if layer < 1:
        raise UsageError(f"layer must be >= 1, got {layer}.")
    return [(path, zk_derivative(u, path)) for path in product(range(u.n), repeat=layer)]


def estimated_peak_width(n: int, a: int, fanout_copies: int = 1) -> int:
    """Simulated width: 3n during the base teleportation, 5n inside a gadget, m·n under an m-way fanout."""
    staged = 5 * n if a >= 2 else 3 * n
    return max(staged, fanout_copies * n)


# ------------------------------------------------------------------ #
#  Precomputation
# ------------------------------------------------------------------ #
def precompute_resource(u: ZkElement, a: Optional[int] = None, symbolic: bool = False) -> LayeredResource:
    k = u.k
    a = default_stop_level(k) if a is None else a
    check_stop_level(k, a)

    tape = GateTape()
    circuit, _ = zk_to_circuit(u)
    base = prepare_gate_resource(circuit, u.n, tape=tape, unitary_tag=u.to_text(), symbolic=symbolic)
    base_events = tape.total_events

    staging = empty_state(tape, symbolic=True)
    staging.next_label = base.state.next_label
    layers: List[List[GadgetGroup]] = []
    candidates: Dict[Path, ZkElement] = {}
    for layer in range(1, a):
        groups = []
        for path, candidate in candidate_corrections(u, layer):
            gates, _ = zk_to_circuit(candidate)
            stage_selective_gate(staging, u.n, gates, [])
            groups.append(GadgetGroup(path=path, candidate=candidate, circuit=gates))
            candidates[path] = candidate
        layers.append(groups)

    check_phase_attribution(tape)
    prep_ledger = count_circuit(tape.gates())
    base.state.tape = None
    logger.debug("Staged %s gadget groups for n=%s k=%s a=%s.", len(candidates), u.n, k, a)
    return LayeredResource(
        u=u,
        base=base,
        layers=layers,
        stop_level=a,
        prep_ledger=prep_ledger,
        staged_width=prep_ledger.peak_width,
        staged_gadget_events=tape.total_events - base_events,
        candidates=candidates,
    )


# ------------------------------------------------------------------ #
#  Classical processing
# ------------------------------------------------------------------ #
class OutcomeProcessor:
    """
    Classical side of the cascade. Fed online by `consume` and replayed by
    `classical_outcome_processing`; both give bit-identical results.
    """

    def __init__(
        self,
        u: ZkElement,
        a: int,
        candidates: Optional[Dict[Path, ZkElement]] = None,
        counter: Optional[ClassicalOpCounter] = None,
    ):
        self.u = u
        self.n = u.n
        self.a = a
        self.counter = counter if counter is not None else ClassicalOpCounter()
        self.frame = PauliString.identity(u.n)
        self.residual = ZkElement.identity(u.n)
        self.pending: Dict[int, Set[Path]] = {layer: set() for layer in range(1, a)}
        self._candidates: Dict[Path, ZkElement] = dict(candidates or {})
        self._started = False

    def candidate(self, path: Path) -> ZkElement:
        # Derivatives are known before the input arrives, so they are not counted.
        if path not in self._candidates:
            self._candidates[path] = zk_derivative(self.u, path)
        return self._candidates[path]

    def _check_width(self, pauli: PauliString) -> None:
        if pauli.n != self.n:
            raise UsageError(f"Byproduct width {pauli.n} does not match n={self.n}.")

    def _absorb(self, path: Path, element: ZkElement) -> None:
        """Commute `element` through the current frame; queue what later layers can fire."""
        support = self.frame.x_support
        remainder = zk_conjugate_by_x(element, support, self.counter)
        room = self.a - 1 - len(path)
        for size in range(1, min(room, len(support)) + 1):
            for subset in combinations(support, size):
                extended = path + subset
                term = self.candidate(extended)
                if not term.monomials:
                    continue
                self.pending[len(extended)] ^= {extended}
                remainder = zk_multiply(remainder, term, self.counter)
        self.residual = zk_multiply(self.residual, remainder, self.counter)

    def start(self, base_byproduct: PauliString) -> None:
        self._check_width(base_byproduct)
        self.frame = base_byproduct
        self._absorb((), self.u)
        self._started = True

    def choice_for(self, path: Path) -> int:
        return CHOICE_A if path in self.pending.get(len(path), ()) else CHOICE_B

    def record_gadget(self, path: Path, choice: int, p2: PauliString, p1: PauliString) -> None:
        if not self._started:
            raise UsageError("The base byproduct must be recorded before any gadget.")
        self._check_width(p2)
        self._check_width(p1)
        expected = self.choice_for(path)
        if choice != expected:
            raise UsageError(f"Gadget {path} has choice {choice} but the outcomes require {expected}.")
        self.frame = pauli_multiply(p2, self.frame)
        if choice == CHOICE_A:
            self.pending[len(path)].discard(path)
            self._absorb(path, self.candidate(path))
        self.frame = pauli_multiply(p1, self.frame)

    def finish(self) -> Tuple[ZkElement, PauliString]:
        """(X_s R X_s, final frame); the first is applied before undoing the frame."""
        if not self._started:
            raise UsageError("No base byproduct was recorded.")
        leftover = sum(len(paths) for paths in self.pending.values())
        if leftover:
            raise UsageError(f"Transcript is incomplete: {leftover} queued corrections never fired.")
        support = self.frame.x_support
        reported = zk_multiply(zk_conjugate_by_x(self.residual, support, self.counter), self.residual, self.counter)
        bound = max(self.u.level - self.a, 0)
        if reported.level > bound:
            raise SimulatorInternalError(f"Residual level {reported.level} exceeds k - a = {bound}.")
        return reported, self.frame


def classical_outcome_processing(
    u: ZkElement,
    transcript: Transcript,
    a: int,
) -> Tuple[ZkElement, PauliString, int]:
    """Replay a transcript: (residual, final_pauli, op_count)."""
    check_stop_level(u.k, a)
    paths = list(gadget_paths(u.n, a))
    if len(transcript.byproducts) != 1 + 2 * len(paths) or len(transcript.choices) != len(paths):
        raise UsageError(
            f"Transcript is incomplete: expected {1 + 2 * len(paths)} byproducts and {len(paths)} choices, "
            f"got {len(transcript.byproducts)} and {len(transcript.choices)}."
        )
    processor = OutcomeProcessor(u, a)
    processor.start(transcript.byproducts[0])
    for index, path in enumerate(paths):
        p2 = transcript.byproducts[1 + 2 * index]
        p1 = transcript.byproducts[2 + 2 * index]
        processor.record_gadget(path, transcript.choices[index], p2, p1)
    residual, final_pauli = processor.finish()
    return residual, final_pauli, processor.counter.count


def _random_pauli(n: int, rng: np.random.Generator) -> PauliString:
    return PauliString.from_bits(rng.integers(2, size=n), rng.integers(2, size=n))


def synthetic_transcript(u: ZkElement, a: int, rng: np.random.Generator) -> Transcript:
    """Uniformly random byproducts with the choices they imply; no measurement lines."""
    check_stop_level(u.k, a)
    processor = OutcomeProcessor(u, a)
    transcript = Transcript()
    base = _random_pauli(u.n, rng)
    transcript.byproducts.append(base)
    processor.start(base)
    for path in gadget_paths(u.n, a):
        choice = processor.choice_for(path)
        p2 = _random_pauli(u.n, rng)
        p1 = _random_pauli(u.n, rng)
        processor.record_gadget(path, choice, p2, p1)
        transcript.byproducts.extend([p2, p1])
        transcript.choices.append(choice)
    return transcript


# ------------------------------------------------------------------ #
#  Residual application
# ------------------------------------------------------------------ #
def partition_monomials(residual: ZkElement) -> List[List[Monomial]]:
    """Greedy largest-first grouping into sets of pairwise disjoint monomials."""
    groups: List[List[Monomial]] = []
    supports: List[Set[int]] = []
    for monomial in sorted(residual.monomials, key=lambda m: (-len(m), m)):
        for group, support in zip(groups, supports):
            if support.isdisjoint(monomial):
                group.append(monomial)
                support.update(monomial)
                break
        else:
            groups.append([monomial])
            supports.append(set(monomial))
    return groups


def _fanout_rounds(m: int) -> List[List[Tuple[int, int]]]:
    """CNOT-tree schedule copying register 0 into registers 1..m-1; each round doubles the copies."""
    rounds = []
    filled = 1
    while filled < m:
        step = min(filled, m - filled)
        rounds.append([(source, filled + source) for source in range(step)])
        filled += step
    return rounds


def fanout_depth(m: int) -> int:
    return len(_fanout_rounds(m))


def fanout(state: Statevector, register: Sequence[int], m: int) -> Tuple[Statevector, List[List[int]]]:
    """Σ c_i|i⟩ -> Σ c_i|i⟩^{⊗m}; returns the m registers, the first being `register`."""
    if m < 2:
        raise UsageError(f"Fanout needs m >= 2, got {m}.")
    register = list(register)
    state.positions(register)
    width = len(register)
    copies = [register] + [allocate_register(state, width) for _ in range(m - 1)]
    for round_pairs in _fanout_rounds(m):
        for source, target in round_pairs:
            for q in range(width):
                apply_gate(state, "CNOT", [copies[source][q], copies[target][q]])
    return state, copies


def unfanout(state: Statevector, copies: Sequence[Sequence[int]]) -> Statevector:
    """Exact inverse of `fanout`; the extra registers are checked to be |0⟩ and released."""
    copies = [list(copy) for copy in copies]
    m = len(copies)
    if m < 2:
        raise UsageError(f"Unfanout needs at least two registers, got {m}.")
    width = len(copies[0])
    for round_pairs in reversed(_fanout_rounds(m)):
        for source, target in reversed(round_pairs):
            for q in range(width):
                apply_gate(state, "CNOT", [copies[source][q], copies[target][q]])
    for copy in copies[1:]:
        release_qubits(state, copy)
    return state


def apply_residual_direct(
    state: Statevector,
    residual: ZkElement,
    parallel: bool = False,
    register: Optional[Sequence[int]] = None,
) -> Statevector:
    """
    Apply a diagonal correction. Serial mode runs one MCZ per monomial; parallel
    mode fans the register out once per disjoint monomial group and applies
    each group on its own copy.
    """
    register = list(register) if register is not None else list(state.live_qubits)
    if residual.n != len(register):
        raise UsageError(f"Residual width {residual.n} does not match register width {len(register)}.")
    groups = partition_monomials(residual)
    if not parallel or len(groups) < 2:
        return apply_zk(state, residual, register)

    state, copies = fanout(state, register, len(groups))
    for copy, group in zip(copies, groups):
        for monomial in group:
            apply_mcz(state, [copy[q] for q in monomial])
    state.global_phase *= residual.sign
    return unfanout(state, copies)


# ------------------------------------------------------------------ #
#  Consumption
# ------------------------------------------------------------------ #
def consume(
    resource: LayeredResource,
    input_state: Statevector,
    rng: np.random.Generator,
    parallel: bool = False,
) -> ProtocolResult:
    """Run the cascade on `input_state` (consumed); the output register holds U|ψ⟩ up to global phase."""
    if resource.consumed:
        raise ResourceConsumedError("This resource state has already been consumed.")
    n = resource.n
    if input_state.width != n:
        raise UsageError(f"Input width {input_state.width} does not match n={n}.")
    base = resource.base
    resource.consumed = True

    state, label_map = combine_states(input_state, base.state)
    state.tape = GateTape()
    state.peak_width = 0
    state.note_width()
    input_labels = list(input_state.live_qubits)
    register = [label_map[label] for label in base.output_half]
    pairs = list(zip(input_labels, [label_map[label] for label in base.input_half]))

    outcomes_source = SampledOutcomes(rng=rng)
    transcript = Transcript()
    bits, state = bell_measure(state, pairs, outcomes_source, transcript)
    base_byproduct = PauliString.from_bits([x for x, _ in bits], [z for _, z in bits])
    transcript.byproducts.append(base_byproduct)

    processor = OutcomeProcessor(resource.u, resource.stop_level, resource.candidates)
    processor.start(base_byproduct)
    for layer in resource.layers:
        for group in layer:
            choice = processor.choice_for(group.path)
            step = run_selective_gate(state, register, group.circuit, [], choice, outcomes_source)
            processor.record_gadget(group.path, choice, step.p2, step.p1)
            transcript.outcomes.extend(step.outcomes)
            transcript.byproducts.extend([step.p2, step.p1])
            transcript.choices.append(choice)
            register = step.output
            logger.debug("Gadget %s choice=%s frame=%s", group.path, choice, processor.frame.to_text())

    residual, final_pauli = processor.finish()
    with phase_scope(state, PHASE_CONSUME):
        apply_residual_direct(state, residual, parallel, register)
        apply_pauli(state, pauli_dagger(final_pauli), register)

    groups = len(partition_monomials(residual))
    fanout_copies = groups if parallel and groups >= 2 else 1
    event_counts = check_phase_attribution(state.tape)
    if event_counts[PHASE_PREP] != resource.staged_gadget_events:
        # Gadget ancilla work rebuilt at consume time is billed to the staged prep ledger.
        raise SimulatorInternalError(
            f"Consumption rebuilt {event_counts[PHASE_PREP]} preparation events, "
            f"but {resource.staged_gadget_events} were staged."
        )
    peak_bound = estimated_peak_width(n, resource.stop_level, fanout_copies)
    if state.peak_width > peak_bound:
        raise SimulatorInternalError(f"Peak live width {state.peak_width} exceeds the bound {peak_bound}.")
    consume_ledger = count_circuit(state.tape.gates(PHASE_CONSUME), live_from_start=input_labels)
    if parallel and groups >= 2:
        # A constant-depth fanout replaces each CNOT tree by one layer.
        analytic = consume_ledger.depth - 2 * fanout_depth(groups) + 2
        consume_ledger = replace(consume_ledger, analytic_depth=analytic)

    return ProtocolResult(
        state=state,
        transcript=transcript,
        residual=residual,
        final_pauli=final_pauli,
        consume_ledger=consume_ledger,
        prep_ledger=resource.prep_ledger,
        classical_op_count=processor.counter.count,
        output=register,
        peak_live_width=state.peak_width,
        event_counts={**event_counts, "total": state.tape.total_events},
    )


def direct_output(u: ZkElement, input_vector: np.ndarray) -> np.ndarray:
    return zk_to_matrix(u) * input_vector


def run_protocol(
    u: ZkElement,
    input_state: Statevector,
    rng: np.random.Generator,
    a: Optional[int] = None,
    parallel: bool = False,
) -> Tuple[LayeredResource, ProtocolResult]:
    """Precompute, consume and (for simulated states) compare with direct application."""
    resource = precompute_resource(u, a, symbolic=input_state.symbolic)
    input_vector = None if input_state.symbolic else state_vector(input_state, input_state.live_qubits)
    result = consume(resource, input_state, rng, parallel)
    if input_vector is not None:
        expected = direct_output(u, input_vector)
        actual = state_vector(result.state, result.output)
        result.trace_distance_to_direct = pure_trace_distance(expected, actual)
    return resource, result