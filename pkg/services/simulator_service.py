"""
Exact statevector simulation with dynamic qubit allocation.

Conventions:
  - `live_qubits[0]` is the most significant bit of the amplitude index.
  - Operations update the state in place and return it for chaining.
  - Measurements remove the measured qubit unless `recycle=False`
    (reference mode used for cross-checks).
  - Every stochastic operation takes a `numpy.random.Generator` explicitly.
"""

from __future__ import annotations

import logging
from contextlib import nullcontext
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from constants.sim_constants import (
    BASIS_X,
    BASIS_Z,
    INITIAL_PLUS,
    INITIAL_ZERO,
    MEASUREMENT_BASES,
    NORM_TOLERANCE,
    SIMULATOR_GATES,
    SINGLE_QUBIT_GATES,
    STATE_EQUALITY_TOLERANCE,
)
from models.gate import Gate, GateTape
from models.pauli_string import PauliString
from models.statevector import MeasurementOutcome, Statevector
from models.zk_element import ZkElement
from services.errors import SimulatorInternalError, UsageError

logger = logging.getLogger(__name__)

_SQRT_HALF = 1.0 / np.sqrt(2.0)

GATE_MATRICES: Dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "TDG": np.array([[1, 0], [0, np.exp(-1j * np.pi / 4)]], dtype=complex),
}

_INITIAL_VECTORS = {
    INITIAL_ZERO: np.array([1, 0], dtype=complex),
    INITIAL_PLUS: np.array([1, 1], dtype=complex) * _SQRT_HALF,
}


# ------------------------------------------------------------------ #
#  Construction
# ------------------------------------------------------------------ #
def empty_state(tape: Optional[GateTape] = None, symbolic: bool = False) -> Statevector:
    return Statevector(tape=tape, symbolic=symbolic)


def symbolic_state(n: int, tape: Optional[GateTape] = None) -> Statevector:
    """Labels 0..n-1 without amplitudes; gates are recorded but not simulated."""
    return Statevector(live_qubits=list(range(n)), next_label=n, tape=tape, symbolic=True)


def product_state(vectors: Sequence[np.ndarray], tape: Optional[GateTape] = None) -> Statevector:
    """Labels 0..n-1 holding the given single-qubit vectors (normalized here)."""
    amplitudes = np.ones(1, dtype=complex)
    for vector in vectors:
        vector = np.asarray(vector, dtype=complex)
        amplitudes = np.kron(amplitudes, vector / np.linalg.norm(vector))
    n = len(vectors)
    return Statevector(amplitudes=amplitudes, live_qubits=list(range(n)), next_label=n, tape=tape)


def state_from_amplitudes(amplitudes: np.ndarray, tape: Optional[GateTape] = None) -> Statevector:
    amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n = int(round(np.log2(amplitudes.size)))
    if 2 ** n != amplitudes.size:
        raise UsageError(f"Amplitude vector length {amplitudes.size} is not a power of two.")
    norm = np.linalg.norm(amplitudes)
    if norm == 0:
        raise UsageError("Amplitude vector must be nonzero.")
    return Statevector(amplitudes=amplitudes / norm, live_qubits=list(range(n)), next_label=n, tape=tape)


def random_product_state(n: int, rng: np.random.Generator) -> Statevector:
    vectors = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(n)]
    return product_state(vectors)


def random_stabilizer_product_state(n: int, rng: np.random.Generator) -> Statevector:
    choices = (
        np.array([1, 0]),
        np.array([0, 1]),
        np.array([1, 1]),
        np.array([1, -1]),
        np.array([1, 1j]),
        np.array([1, -1j]),
    )
    return product_state([choices[int(rng.integers(len(choices)))] for _ in range(n)])


def allocate_qubits(state: Statevector, count: int, initial: str) -> Statevector:
    """Append `count` fresh qubits in the product state spelled by `initial` (over {0,+})."""
    if count < 1:
        raise UsageError(f"count must be >= 1, got {count}.")
    if len(initial) != count or any(symbol not in _INITIAL_VECTORS for symbol in initial):
        raise UsageError(f"initial must be a string over {{0,+}} of length {count}, got '{initial}'.")

    new_labels = list(range(state.next_label, state.next_label + count))
    if set(new_labels) & set(state.live_qubits):
        raise SimulatorInternalError(f"Label collision while allocating {new_labels}.")

    if not state.symbolic:
        fresh = np.ones(1, dtype=complex)
        for symbol in initial:
            fresh = np.kron(fresh, _INITIAL_VECTORS[symbol])
        state.amplitudes = np.kron(state.amplitudes, fresh)
    state.live_qubits.extend(new_labels)
    state.next_label += count
    state.note_width()
    for label, symbol in zip(new_labels, initial):
        state.record("ALLOC", label)
        if symbol == INITIAL_PLUS:
            # |+⟩ preparation is an H on a fresh |0⟩.
            state.record("H", label)
    return state


def allocate_register(state: Statevector, count: int, initial: Optional[str] = None) -> List[int]:
    allocate_qubits(state, count, initial if initial is not None else INITIAL_ZERO * count)
    return state.live_qubits[-count:]


# ------------------------------------------------------------------ #
#  Unitaries
# ------------------------------------------------------------------ #
def _tensor(state: Statevector) -> np.ndarray:
    return state.amplitudes.reshape((2,) * state.width)


def _check_norm(state: Statevector) -> None:
    drift = abs(state.norm() - 1.0)
    if drift > NORM_TOLERANCE * max(1, state.width):
        raise SimulatorInternalError(f"Norm drifted by {drift:.3e}.")


def _apply_single(state: Statevector, matrix: np.ndarray, position: int) -> None:
    view = state.amplitudes.reshape(2 ** position, 2, -1)
    state.amplitudes = np.einsum("ij,ajb->aib", matrix, view).reshape(-1)


def _apply_cnot(state: Statevector, control: int, target: int) -> None:
    tensor = _tensor(state)
    index: List[object] = [slice(None)] * state.width
    index[control] = 1
    block = tensor[tuple(index)]
    target_axis = target if target < control else target - 1
    block[...] = np.flip(block, axis=target_axis).copy()


def _flip_sign_where_all_one(state: Statevector, positions: Sequence[int]) -> None:
    tensor = _tensor(state)
    index: List[object] = [slice(None)] * state.width
    for position in positions:
        index[position] = 1
    tensor[tuple(index)] *= -1


def apply_gate(state: Statevector, gate: str, targets: Sequence[int]) -> Statevector:
    """Apply one of X, Z, H, S, T (and SDG/TDG) or CNOT, CZ to live labels."""
    gate = gate.upper()
    targets = list(targets)
    positions = state.positions(targets)
    if gate not in SIMULATOR_GATES:
        raise UsageError(f"Unknown gate '{gate}'.")
    arity = 1 if gate in SINGLE_QUBIT_GATES else 2
    if len(positions) != arity:
        raise UsageError(f"{gate} acts on {arity} qubit(s), got {targets}.")

    if not state.symbolic:
        if gate in SINGLE_QUBIT_GATES:
            _apply_single(state, GATE_MATRICES[gate], positions[0])
        elif gate == "CNOT":
            _apply_cnot(state, positions[0], positions[1])
        else:
            _flip_sign_where_all_one(state, positions)
        _check_norm(state)
    state.record(gate, *targets)
    return state


def apply_mcz(state: Statevector, targets: Sequence[int]) -> Statevector:
    """Flip the sign of every basis state where all targets read 1."""
    targets = list(targets)
    if not targets:
        raise UsageError("apply_mcz needs at least one target.")
    positions = state.positions(targets)
    if not state.symbolic:
        _flip_sign_where_all_one(state, positions)
    state.record("MCZ", *targets)
    return state


def apply_circuit(state: Statevector, gates: Iterable[Gate], register: Sequence[int]) -> Statevector:
    """Apply an index-based circuit; gate qubit i acts on `register[i]`."""
    register = list(register)
    for gate in gates:
        try:
            labels = [register[q] for q in gate.qubits]
        except IndexError as exc:
            raise UsageError(f"Gate {gate.name}{gate.qubits} exceeds register width {len(register)}.") from exc
        if gate.name == "MCZ":
            apply_mcz(state, labels)
        else:
            apply_gate(state, gate.name, labels)
    return state


def apply_pauli(state: Statevector, pauli: PauliString, register: Sequence[int]) -> Statevector:
    """Apply i**phase * ⊗ X^x Z^z: Z first, then X, phase into global_phase."""
    register = list(register)
    if pauli.n != len(register):
        raise UsageError(f"Pauli width {pauli.n} does not match register width {len(register)}.")
    for label, x_bit, z_bit in zip(register, pauli.x_bits, pauli.z_bits):
        if z_bit:
            apply_gate(state, "Z", [label])
        if x_bit:
            apply_gate(state, "X", [label])
    state.global_phase *= pauli.phase_value
    return state


def apply_zk(state: Statevector, element: ZkElement, register: Sequence[int]) -> Statevector:
    register = list(register)
    if element.n != len(register):
        raise UsageError(f"Element width {element.n} does not match register width {len(register)}.")
    for monomial in element.sorted_monomials:
        apply_mcz(state, [register[q] for q in monomial])
    state.global_phase *= element.sign
    return state


# ------------------------------------------------------------------ #
#  Measurement
# ------------------------------------------------------------------ #
def _outcome_probability(state: Statevector, position: int, basis: str) -> Tuple[np.ndarray, float]:
    """Measured-basis view of the amplitudes; the state itself is left untouched."""
    view = state.amplitudes.reshape(2 ** position, 2, -1)
    if basis == BASIS_X:
        view = np.einsum("ij,ajb->aib", GATE_MATRICES["H"], view)
    p_one = float(np.sum(np.abs(view[:, 1, :]) ** 2))
    return view, min(max(p_one, 0.0), 1.0)


def _collapse(
    state: Statevector,
    qubit: int,
    position: int,
    basis: str,
    view: np.ndarray,
    bit: int,
    probability: float,
    recycle: bool,
) -> None:
    scale = 1.0 / np.sqrt(probability)
    if recycle:
        state.amplitudes = (view[:, bit, :] * scale).reshape(-1)
        state.live_qubits.pop(position)
    else:
        kept = np.zeros_like(view)
        kept[:, bit, :] = view[:, bit, :] * scale
        state.amplitudes = kept.reshape(-1)
        if basis == BASIS_X:
            _apply_single(state, GATE_MATRICES["H"], position)
    state.record("MEASURE", qubit)


def measure_qubit(
    state: Statevector,
    qubit: int,
    basis: str,
    rng: np.random.Generator,
    recycle: bool = True,
) -> Tuple[MeasurementOutcome, Statevector]:
    """Sample a Born-rule outcome, collapse and (by default) remove the qubit."""
    if basis not in MEASUREMENT_BASES:
        raise UsageError(f"Measurement basis must be X or Z, got '{basis}'.")
    position = state.position(qubit)
    if state.symbolic:
        # Every teleportation outcome is uniform, so symbolic runs draw fair bits.
        bit = int(rng.integers(2))
        if recycle:
            state.live_qubits.pop(position)
        state.record("MEASURE", qubit)
        return MeasurementOutcome(qubit=qubit, basis=basis, bit=bit), state
    view, p_one = _outcome_probability(state, position, basis)
    bit = int(rng.random() < p_one)
    probability = p_one if bit else 1.0 - p_one
    _collapse(state, qubit, position, basis, view, bit, probability, recycle)
    _check_norm(state)
    return MeasurementOutcome(qubit=qubit, basis=basis, bit=bit), state


def postselect_qubit(
    state: Statevector,
    qubit: int,
    basis: str,
    bit: int,
    recycle: bool = True,
) -> Tuple[float, Statevector]:
    """Project onto a chosen outcome; returns its probability. Used to walk every branch."""
    if basis not in MEASUREMENT_BASES:
        raise UsageError(f"Measurement basis must be X or Z, got '{basis}'.")
    if bit not in (0, 1):
        raise UsageError(f"bit must be 0 or 1, got {bit}.")
    if state.symbolic:
        raise UsageError("Post-selection needs amplitudes; the state is symbolic.")
    position = state.position(qubit)
    view, p_one = _outcome_probability(state, position, basis)
    probability = p_one if bit else 1.0 - p_one
    if probability <= NORM_TOLERANCE:
        raise UsageError(f"Outcome {basis}={bit} on qubit {qubit} has zero probability.")
    _collapse(state, qubit, position, basis, view, bit, probability, recycle)
    return probability, state


def release_qubits(state: Statevector, labels: Sequence[int]) -> Statevector:
    """Drop ancillas known to be back in |0⟩; recorded as measurements."""
    for label in labels:
        if state.symbolic:
            state.live_qubits.pop(state.position(label))
            state.record("MEASURE", label)
            continue
        probability, _ = postselect_qubit(state, label, BASIS_Z, 0)
        if abs(probability - 1.0) > STATE_EQUALITY_TOLERANCE:
            logger.error("Ancilla %s left dirty after uncompute (p0=%.3e)", label, probability)
            raise SimulatorInternalError(f"Ancilla {label} was not restored to |0⟩ (p0={probability:.3e}).")
    return state


# ------------------------------------------------------------------ #
#  Oracles
# ------------------------------------------------------------------ #
def state_vector(state: Statevector, order: Sequence[int], include_phase: bool = False) -> np.ndarray:
    """Amplitudes with `order[0]` as the most significant bit."""
    order = list(order)
    if state.symbolic:
        raise UsageError("A symbolic state has no amplitudes.")
    if sorted(order) != sorted(state.live_qubits):
        raise UsageError(f"Order {order} does not cover live qubits {state.live_qubits}.")
    if not order:
        vector = state.amplitudes.copy()
    else:
        axes = [state.position(label) for label in order]
        vector = np.transpose(_tensor(state), axes).reshape(-1)
    return vector * state.global_phase if include_phase else vector.copy()


def pure_trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """
    Trace distance sqrt(1 - |⟨a|b⟩|²) between pure states; blind to global phase.
    Computed from the phase-aligned difference to keep equal states near 1e-16.
    """
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.shape != b.shape:
        raise UsageError(f"Vector lengths differ: {a.size} vs {b.size}.")
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    overlap = np.vdot(a, b)
    aligned = b * np.exp(-1j * np.angle(overlap)) if abs(overlap) > 0 else b
    half_gap = 0.5 * float(np.linalg.norm(a - aligned)) ** 2  # = 1 - |⟨a|b⟩|
    return float(np.sqrt(max(0.0, half_gap * (2.0 - half_gap))))


def circuit_unitary(gates: Sequence[Gate], n: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix of an index-based circuit (test oracle)."""
    dim = 2 ** n
    columns = []
    for column in range(dim):
        basis = np.zeros(dim, dtype=complex)
        basis[column] = 1.0
        state = state_from_amplitudes(basis)
        apply_circuit(state, gates, list(range(n)))
        columns.append(state.amplitudes * state.global_phase)
    return np.stack(columns, axis=1)


def apply_circuit_to_vector(vector: np.ndarray, gates: Sequence[Gate]) -> np.ndarray:
    state = state_from_amplitudes(vector)
    apply_circuit(state, gates, list(range(state.width)))
    return state.amplitudes * state.global_phase


def combine_states(a: Statevector, b: Statevector) -> Tuple[Statevector, Dict[int, int]]:
    """a ⊗ b in one state; b's labels are shifted past a's. Returns the label map for b."""
    if a.symbolic != b.symbolic:
        raise UsageError("Cannot combine a symbolic state with a simulated one.")
    offset = max(a.next_label, max(a.live_qubits, default=-1) + 1)
    label_map = {label: label + offset for label in b.live_qubits}
    combined = Statevector(
        amplitudes=a.amplitudes.copy() if a.symbolic else np.kron(a.amplitudes, b.amplitudes),
        symbolic=a.symbolic,
        live_qubits=list(a.live_qubits) + [label_map[label] for label in b.live_qubits],
        global_phase=a.global_phase * b.global_phase,
        next_label=offset + max(b.next_label, max(b.live_qubits, default=-1) + 1),
        tape=a.tape if a.tape is not None else b.tape,
    )
    combined.peak_width = max(a.peak_width, b.peak_width)
    combined.note_width()
    return combined, label_map


def phase_scope(state: Statevector, phase: str):
    """Context that tags recorded events with a ledger phase (no-op without a tape)."""
    return state.tape.in_phase(phase) if state.tape is not None else nullcontext()
