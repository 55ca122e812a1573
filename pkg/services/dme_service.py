"""
Density matrix exponentiation.

Each step adjoins a fresh copy of rho on a scratch register, conjugates by
exp(-i·(t/m)·SWAP) and traces the copy out. After m steps the target has been
evolved under exp(-i·t·rho) up to an O(t²/m) error.
"""

from __future__ import annotations

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from constants.report_constants import BUDGET_CONSTANT_CANDIDATES
from constants.sim_constants import DENSITY_TOLERANCE, MAX_EXACT_EXPONENTIAL_QUBITS, PSD_TOLERANCE
from models.density_matrix import DensityMatrix
from models.dme_config import DmeConfig, DmeSweepRow
from models.ledger import ScalingFit
from models.statevector import Statevector
from services.cost_model_service import fit_scaling
from services.density_matrix_service import (
    conjugate,
    from_statevector,
    partial_swap,
    partial_trace,
    relabel,
    tensor,
    trace_distance,
)
from services.errors import UsageError, VerificationError
from services.simulator_service import random_product_state, state_from_amplitudes

logger = logging.getLogger(__name__)

CalibrationProbe = Tuple[DensityMatrix, Statevector]


def _check_same_width(target: DensityMatrix, rho: DensityMatrix) -> None:
    if target.width != rho.width:
        raise UsageError(f"rho acts on {rho.width} qubits but the target has {target.width}.")


def _copy_labels(target: DensityMatrix) -> List[int]:
    start = 1 + max(target.live_qubits, default=-1)
    return list(range(start, start + target.width))


def dme_apply(target: DensityMatrix, rho: DensityMatrix, t: float, m: int) -> DensityMatrix:
    """Apply exp(-i·t·rho) to `target` by consuming m copies of rho."""
    _check_same_width(target, rho)
    if m < 1:
        raise UsageError(f"Copy count m must be >= 1, got {m}.")
    if t == 0:
        return target.copy()

    copy_labels = _copy_labels(target)
    fresh_copy = relabel(rho, copy_labels)
    angle = t / m
    current = target.copy()
    for _ in range(m):
        joint = tensor(current, fresh_copy)
        joint = partial_swap(joint, current.live_qubits, copy_labels, angle)
        current = partial_trace(joint, copy_labels)
    current.check()
    return current


def exact_exponential(rho: DensityMatrix, t: float) -> np.ndarray:
    """Dense exp(-i·t·rho) from the eigendecomposition of rho."""
    if rho.width > MAX_EXACT_EXPONENTIAL_QUBITS:
        raise UsageError(
            f"Exact exponential is limited to {MAX_EXACT_EXPONENTIAL_QUBITS} qubits, got {rho.width}."
        )
    hermitian = 0.5 * (rho.matrix + rho.matrix.conj().T)
    eigenvalues, eigenvectors = np.linalg.eigh(hermitian)
    return (eigenvectors * np.exp(-1j * t * eigenvalues)) @ eigenvectors.conj().T


def exact_evolution(target: DensityMatrix, rho: DensityMatrix, t: float) -> DensityMatrix:
    _check_same_width(target, rho)
    return conjugate(target, exact_exponential(rho, t))


def reflection_matrix(b: Statevector) -> np.ndarray:
    """R = I - 2|b⟩⟨b|."""
    vector = from_statevector(b)
    return np.eye(2 ** vector.width, dtype=complex) - 2.0 * vector.matrix


def reflection_via_dme(target: DensityMatrix, b: Statevector, eps: float, config: DmeConfig) -> DensityMatrix:
    """Reflect `target` about |b⟩ with m = ceil(C·π²/eps) copies of |b⟩⟨b|."""
    if b.width != target.width:
        raise UsageError(f"|b> acts on {b.width} qubits but the target has {target.width}.")
    rho = relabel(from_statevector(b), target.live_qubits)
    m = config.copies_for(math.pi, eps)
    logger.debug("Reflection via DME with m=%s copies (eps=%s, C=%s).", m, eps, config.budget_constant)
    return dme_apply(target, rho, math.pi, m)


def _width_of(dim: int) -> int:
    width = int(round(math.log2(dim))) if dim > 0 else -1
    if width < 0 or 2 ** width != dim:
        raise UsageError(f"Hamiltonian dimension {dim} is not a power of two.")
    return width


def hamiltonian_to_state(
    h: np.ndarray,
    c: float,
    labels: Optional[Sequence[int]] = None,
) -> Tuple[DensityMatrix, float]:
    """
    rho = (h + cI) / tr(h + cI) and t_scale = tr(h + cI).

    Simulating h for time t is then a DME run of time t·t_scale.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise UsageError(f"Hamiltonian must be a square matrix, got shape {h.shape}.")
    width = _width_of(h.shape[0])
    if np.max(np.abs(h - h.conj().T), initial=0.0) > DENSITY_TOLERANCE:
        raise UsageError("Hamiltonian is not Hermitian.")

    min_eigenvalue = float(np.min(np.linalg.eigvalsh(h)))
    if min_eigenvalue + c < -PSD_TOLERANCE:
        raise UsageError(f"Shift c={c} leaves h + cI indefinite; the minimal valid shift is {-min_eigenvalue}.")
    shifted = h + c * np.eye(h.shape[0], dtype=complex)
    t_scale = float(np.real(np.trace(shifted)))
    if t_scale <= DENSITY_TOLERANCE:
        raise UsageError("h + cI has zero trace; increase the shift.")

    labels = list(range(width)) if labels is None else list(labels)
    rho = DensityMatrix(matrix=shifted / t_scale, live_qubits=labels)
    rho.check(check_psd=True)
    return rho, t_scale


def simulate_hamiltonian(target: DensityMatrix, h: np.ndarray, c: float, t: float, m: int) -> DensityMatrix:
    """exp(-i·t·h) up to global phase, via DME on the normalized shifted Hamiltonian."""
    rho, t_scale = hamiltonian_to_state(h, c, target.live_qubits)
    return dme_apply(target, rho, t * t_scale, m)


def reflection_budget(q: int, eps: float, budget_constant: float) -> int:
    """Total copies for q reflections at overall error eps: each call runs at eps/q."""
    if q < 1:
        raise UsageError(f"Reflection count q must be >= 1, got {q}.")
    if eps <= 0:
        raise UsageError(f"eps must be > 0, got {eps}.")
    if budget_constant <= 0:
        raise UsageError(f"Budget constant must be > 0, got {budget_constant}.")
    return q * math.ceil(budget_constant * math.pi ** 2 * q / eps)


def random_pure_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random normalized vector on n qubits."""
    vector = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return vector / np.linalg.norm(vector)


def random_pure_density(n: int, rng: np.random.Generator, labels: Optional[Sequence[int]] = None) -> DensityMatrix:
    return DensityMatrix.from_vector(random_pure_vector(n, rng), list(range(n)) if labels is None else labels)


def error_sweep(
    rho: DensityMatrix,
    t: float,
    m_values: Sequence[int],
    probes: Sequence[DensityMatrix],
    seed: Optional[int] = None,
) -> List[DmeSweepRow]:
    """Mean trace-distance error of dme_apply against exact evolution, per m."""
    m_values = list(m_values)
    if not m_values:
        raise UsageError("error_sweep needs at least one m value.")
    if not probes:
        raise UsageError("error_sweep needs at least one probe state.")

    exact = [exact_evolution(probe, rho, t) for probe in probes]
    rows: List[DmeSweepRow] = []
    for m in m_values:
        errors = np.array([trace_distance(dme_apply(probe, rho, t, m), target) for probe, target in zip(probes, exact)])
        rows.append(
            DmeSweepRow(
                m=int(m),
                t=float(t),
                mean_error=float(errors.mean()),
                std_error=float(errors.std()),
                n_probes=len(probes),
                seed=seed,
            )
        )
        logger.debug("DME sweep m=%s mean error %.3e", m, rows[-1].mean_error)
    return rows


def sweep_slope(rows: Sequence[DmeSweepRow]) -> Optional[ScalingFit]:
    """log-log fit of mean error against m; None when the errors vanish."""
    points = [(row.m, row.mean_error) for row in rows]
    if len(points) < 3 or any(error <= 0 for _, error in points):
        return None
    return fit_scaling(points)


def default_calibration_probes(rng: np.random.Generator, count: int = 4, width: int = 1) -> List[CalibrationProbe]:
    probes: List[CalibrationProbe] = []
    for _ in range(count):
        target = from_statevector(random_product_state(width, rng))
        b = state_from_amplitudes(random_pure_vector(width, rng))
        probes.append((target, b))
    return probes


def calibrate_budget_constant(
    probes: Sequence[CalibrationProbe],
    eps: float,
    candidates: Sequence[float] = BUDGET_CONSTANT_CANDIDATES,
) -> float:
    """Smallest C for which every probe's DME reflection lands within eps of the exact one."""
    if eps <= 0:
        raise UsageError(f"eps must be > 0, got {eps}.")
    for candidate in sorted(candidates):
        config = DmeConfig(t=math.pi, budget_constant=candidate)
        worst = 0.0
        for target, b in probes:
            approx = reflection_via_dme(target, b, eps, config)
            exact = conjugate(target, reflection_matrix(b))
            worst = max(worst, trace_distance(approx, exact))
        logger.info("Budget constant C=%s: worst reflection error %.3e (eps=%s).", candidate, worst, eps)
        if worst <= eps:
            return float(candidate)
    raise VerificationError(f"No budget constant in {list(candidates)} meets eps={eps}.")
