"""
Density-matrix primitives: tensoring, partial swap, partial trace and trace distance.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from models.density_matrix import DensityMatrix
from models.statevector import Statevector
from services.errors import UsageError
from services.simulator_service import state_vector


def from_statevector(state: Statevector) -> DensityMatrix:
    return DensityMatrix.from_vector(state_vector(state, state.live_qubits), state.live_qubits)


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    if set(a.live_qubits) & set(b.live_qubits):
        raise UsageError("Cannot tensor density matrices that share labels.")
    return DensityMatrix(matrix=np.kron(a.matrix, b.matrix), live_qubits=a.live_qubits + b.live_qubits)


def relabel(dm: DensityMatrix, labels: Sequence[int]) -> DensityMatrix:
    labels = list(labels)
    if len(labels) != dm.width or len(set(labels)) != len(labels):
        raise UsageError(f"Need {dm.width} distinct labels, got {labels}.")
    return DensityMatrix(matrix=dm.matrix.copy(), live_qubits=labels)


def _swap_permutation(width: int, positions_a: Sequence[int], positions_b: Sequence[int]) -> np.ndarray:
    """Index permutation of SWAP between paired positions (position 0 = most significant bit)."""
    indices = np.arange(2 ** width)
    permuted = indices.copy()
    for pa, pb in zip(positions_a, positions_b):
        shift_a = width - 1 - pa
        shift_b = width - 1 - pb
        bit_a = (permuted >> shift_a) & 1
        bit_b = (permuted >> shift_b) & 1
        differ = bit_a ^ bit_b
        permuted = permuted ^ ((differ << shift_a) | (differ << shift_b))
    return permuted


def partial_swap(dm: DensityMatrix, reg_a: Sequence[int], reg_b: Sequence[int], angle: float) -> DensityMatrix:
    """
    Conjugate by exp(-i·angle·SWAP) = cos(angle)·I - i·sin(angle)·SWAP across paired registers.
    """
    reg_a = list(reg_a)
    reg_b = list(reg_b)
    if len(reg_a) != len(reg_b):
        raise UsageError(f"Register sizes differ: {len(reg_a)} vs {len(reg_b)}.")
    if set(reg_a) & set(reg_b) or len(set(reg_a)) != len(reg_a) or len(set(reg_b)) != len(reg_b):
        raise UsageError("Swap registers must be disjoint and duplicate free.")
    positions_a = [dm.position(label) for label in reg_a]
    positions_b = [dm.position(label) for label in reg_b]

    perm = _swap_permutation(dm.width, positions_a, positions_b)
    rho = dm.matrix
    c = np.cos(angle)
    s = np.sin(angle)
    # SWAP is a permutation matrix: (ρ·SWAP)[i, j] = ρ[i, perm[j]], (SWAP·ρ)[i, j] = ρ[perm[i], j].
    rho_swap = rho[:, perm]
    swap_rho = rho[perm, :]
    swap_rho_swap = rho[np.ix_(perm, perm)]
    matrix = c * c * rho + s * s * swap_rho_swap + 1j * c * s * (rho_swap - swap_rho)
    return DensityMatrix(matrix=matrix, live_qubits=list(dm.live_qubits))


def partial_trace(dm: DensityMatrix, discard: Sequence[int]) -> DensityMatrix:
    discard = list(discard)
    discard_positions = sorted(dm.position(label) for label in discard)
    if len(set(discard_positions)) != len(discard_positions):
        raise UsageError("Discard labels must be distinct.")
    keep_positions = [p for p in range(dm.width) if p not in discard_positions]
    width = dm.width

    reshaped = dm.matrix.reshape((2,) * (2 * width))
    row_axes = keep_positions + discard_positions
    col_axes = [width + p for p in keep_positions] + [width + p for p in discard_positions]
    reshaped = np.transpose(reshaped, row_axes + col_axes)
    keep_dim = 2 ** len(keep_positions)
    discard_dim = 2 ** len(discard_positions)
    reshaped = reshaped.reshape(keep_dim, discard_dim, keep_dim, discard_dim)
    reduced = np.einsum("ajbj->ab", reshaped)
    return DensityMatrix(matrix=reduced, live_qubits=[dm.live_qubits[p] for p in keep_positions])


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the sum of singular values of a - b."""
    if a.matrix.shape != b.matrix.shape:
        raise UsageError(f"Dimension mismatch: {a.matrix.shape} vs {b.matrix.shape}.")
    if a.live_qubits != b.live_qubits:
        raise UsageError(f"Live qubits differ: {a.live_qubits} vs {b.live_qubits}.")
    singular_values = np.linalg.svd(a.matrix - b.matrix, compute_uv=False)
    return float(min(1.0, 0.5 * np.sum(singular_values)))


def conjugate(dm: DensityMatrix, unitary: np.ndarray) -> DensityMatrix:
    return DensityMatrix(matrix=unitary @ dm.matrix @ unitary.conj().T, live_qubits=list(dm.live_qubits))
