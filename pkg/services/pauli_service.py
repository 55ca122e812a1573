"""
Signed Pauli algebra and Clifford tableau conjugation.

Phase convention: a PauliString is i**phase * ⊗_j X^x_j Z^z_j, so Y = i·X·Z.
"""

from __future__ import annotations

from functools import reduce
from typing import List, Optional, Sequence

import numpy as np

from constants.sim_constants import CLIFFORD_GATES, RANDOM_CLIFFORD_GATES, RANDOM_CLIFFORD_LENGTH_FACTOR
from models.clifford_tableau import CliffordTableau
from models.gate import Gate
from models.pauli_string import PauliString
from services.errors import UsageError

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_I = np.eye(2, dtype=complex)


def _require_same_width(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise UsageError(f"Pauli widths differ: {a.n} vs {b.n}.")


def pauli_multiply(a: PauliString, b: PauliString) -> PauliString:
    """a·b. Moving b's X factors left past a's Z factors costs (-1)^(z_a · x_b)."""
    _require_same_width(a, b)
    swaps = sum(za & xb for za, xb in zip(a.z_bits, b.x_bits))
    return PauliString(
        n=a.n,
        x_bits=tuple(xa ^ xb for xa, xb in zip(a.x_bits, b.x_bits)),
        z_bits=tuple(za ^ zb for za, zb in zip(a.z_bits, b.z_bits)),
        phase=a.phase + b.phase + 2 * swaps,
    )


def pauli_product(paulis: Sequence[PauliString], n: int) -> PauliString:
    return reduce(pauli_multiply, paulis, PauliString.identity(n))


def pauli_dagger(p: PauliString) -> PauliString:
    overlaps = sum(x & z for x, z in zip(p.x_bits, p.z_bits))
    return PauliString(n=p.n, x_bits=p.x_bits, z_bits=p.z_bits, phase=-p.phase + 2 * overlaps)


def paulis_commute(a: PauliString, b: PauliString) -> bool:
    _require_same_width(a, b)
    symplectic = sum((xa & zb) ^ (za & xb) for xa, za, xb, zb in zip(a.x_bits, a.z_bits, b.x_bits, b.z_bits))
    return symplectic % 2 == 0


def pauli_to_matrix(p: PauliString) -> np.ndarray:
    """Dense matrix, qubit 0 as the most significant tensor factor."""
    factors = [
        (_X if x else _I) @ (_Z if z else _I)
        for x, z in zip(p.x_bits, p.z_bits)
    ]
    matrix = reduce(np.kron, factors, np.eye(1, dtype=complex))
    return p.phase_value * matrix


# ------------------------------------------------------------------ #
#  Gate conjugation  P -> G P G†
# ------------------------------------------------------------------ #
def _conjugate_by_gate(p: PauliString, gate: Gate) -> PauliString:
    x = list(p.x_bits)
    z = list(p.z_bits)
    phase = p.phase
    name = gate.name

    if name == "H":
        (q,) = gate.qubits
        phase += 2 * (x[q] & z[q])
        x[q], z[q] = z[q], x[q]
    elif name == "S":
        (q,) = gate.qubits
        phase += x[q]
        z[q] ^= x[q]
    elif name == "X":
        (q,) = gate.qubits
        phase += 2 * z[q]
    elif name == "Z":
        (q,) = gate.qubits
        phase += 2 * x[q]
    elif name == "CNOT":
        control, target = gate.qubits
        x[target] ^= x[control]
        z[control] ^= z[target]
    elif name == "CZ":
        a, b = gate.qubits
        phase += 2 * (x[a] & x[b])
        z[a] ^= x[b]
        z[b] ^= x[a]
    else:
        raise UsageError(f"Gate '{name}' is not a supported Clifford gate.")
    return PauliString(n=p.n, x_bits=tuple(x), z_bits=tuple(z), phase=phase)


def _validate_clifford_circuit(gates: Sequence[Gate], n: int) -> None:
    for gate in gates:
        if gate.name not in CLIFFORD_GATES:
            raise UsageError(f"Non-Clifford gate '{gate.name}' in tableau input.")
        if any(q < 0 or q >= n for q in gate.qubits) or len(set(gate.qubits)) != len(gate.qubits):
            raise UsageError(f"Gate {gate.name}{gate.qubits} has invalid targets for width {n}.")


def tableau_from_circuit(gates: Sequence[Gate], n: int) -> CliffordTableau:
    """Images of X_i and Z_i under U = G_m ... G_1 for the circuit [G_1, ..., G_m]."""
    _validate_clifford_circuit(gates, n)
    tableau = CliffordTableau.identity(n)
    x_images = list(tableau.x_images)
    z_images = list(tableau.z_images)
    for gate in gates:
        x_images = [_conjugate_by_gate(image, gate) for image in x_images]
        z_images = [_conjugate_by_gate(image, gate) for image in z_images]
    return CliffordTableau(n=n, x_images=tuple(x_images), z_images=tuple(z_images))


def tableau_conjugate(t: CliffordTableau, p: PauliString) -> PauliString:
    """U p U† from the generator images, keeping p's per-qubit X-then-Z order."""
    if t.n != p.n:
        raise UsageError(f"Tableau width {t.n} does not match Pauli width {p.n}.")
    result = PauliString(n=p.n, x_bits=(0,) * p.n, z_bits=(0,) * p.n, phase=p.phase)
    for i in range(p.n):
        if p.x_bits[i]:
            result = pauli_multiply(result, t.x_images[i])
        if p.z_bits[i]:
            result = pauli_multiply(result, t.z_images[i])
    return result


def factorize_correction(t: CliffordTableau, x_bits: Sequence[int], z_bits: Sequence[int]) -> PauliString:
    """Π_i (U X_i U†)^x_i · Π_i (U Z_i U†)^z_i from the precomputed images."""
    if len(x_bits) != t.n or len(z_bits) != t.n:
        raise UsageError(f"Outcome bit vectors must have length {t.n}.")
    result = PauliString.identity(t.n)
    for i, bit in enumerate(x_bits):
        if bit:
            result = pauli_multiply(result, t.x_images[i])
    for i, bit in enumerate(z_bits):
        if bit:
            result = pauli_multiply(result, t.z_images[i])
    return result


def check_tableau(t: CliffordTableau) -> bool:
    """Images must keep the generators' commutation pattern."""
    for i in range(t.n):
        for j in range(t.n):
            if not paulis_commute(t.x_images[i], t.x_images[j]):
                return False
            if not paulis_commute(t.z_images[i], t.z_images[j]):
                return False
            anticommute = i == j
            if paulis_commute(t.x_images[i], t.z_images[j]) == anticommute:
                return False
    return True


def random_clifford_circuit(n: int, length: Optional[int], rng: np.random.Generator) -> List[Gate]:
    """
    Random {H, S, CNOT, CZ} circuit. Not uniform over the Clifford group.
    `length=None` uses 5n² gates.
    """
    if length is None:
        length = RANDOM_CLIFFORD_LENGTH_FACTOR * n * n
    if length < 0:
        raise UsageError(f"length must be >= 0, got {length}.")
    names = RANDOM_CLIFFORD_GATES if n >= 2 else tuple(g for g in RANDOM_CLIFFORD_GATES if g in ("H", "S"))
    gates: List[Gate] = []
    for _ in range(length):
        name = names[int(rng.integers(len(names)))]
        if name in ("CNOT", "CZ"):
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(Gate.of(name, int(a), int(b)))
        else:
            gates.append(Gate.of(name, int(rng.integers(n))))
    return gates
