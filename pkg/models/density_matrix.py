from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from constants.sim_constants import DENSITY_TOLERANCE, PSD_TOLERANCE
from services.errors import SimulatorInternalError, UsageError


@dataclass
class DensityMatrix:
    matrix: np.ndarray
    live_qubits: List[int] = field(default_factory=list)

    @classmethod
    def from_vector(cls, amplitudes: np.ndarray, labels: Sequence[int]) -> "DensityMatrix":
        vector = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(matrix=np.outer(vector, vector.conj()), live_qubits=list(labels))

    @classmethod
    def maximally_mixed(cls, labels: Sequence[int]) -> "DensityMatrix":
        dim = 2 ** len(labels)
        return cls(matrix=np.eye(dim, dtype=complex) / dim, live_qubits=list(labels))

    @property
    def width(self) -> int:
        return len(self.live_qubits)

    def position(self, label: int) -> int:
        try:
            return self.live_qubits.index(label)
        except ValueError as exc:
            raise UsageError(f"Qubit {label} is not live.") from exc

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def check(self, check_psd: bool = False) -> None:
        """Raise if the trace, hermiticity (and optionally positivity) checks fail."""
        if abs(self.trace() - 1.0) > DENSITY_TOLERANCE:
            raise SimulatorInternalError(f"Density matrix trace drifted to {self.trace()}.")
        if np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0) > DENSITY_TOLERANCE:
            raise SimulatorInternalError("Density matrix is not Hermitian.")
        if check_psd:
            min_eigenvalue = float(np.min(np.linalg.eigvalsh(self.matrix)))
            if min_eigenvalue < -PSD_TOLERANCE:
                raise SimulatorInternalError(f"Density matrix has eigenvalue {min_eigenvalue}.")

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(matrix=self.matrix.copy(), live_qubits=list(self.live_qubits))
