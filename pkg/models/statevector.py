from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from constants.sim_constants import MEASUREMENT_BASES
from models.gate import GateTape
from services.errors import UsageError


def _empty_amplitudes() -> np.ndarray:
    return np.ones(1, dtype=complex)


@dataclass
class Statevector:
    """
    Pure state over the labels in `live_qubits`.

    `live_qubits[0]` is the most significant bit of the amplitude index.
    Global phase is kept apart from `amplitudes` so gadget code can ignore it.
    A symbolic state carries labels and a tape but no amplitudes; it is used to
    count gates at widths the dense simulator cannot hold.
    """

    amplitudes: np.ndarray = field(default_factory=_empty_amplitudes)
    live_qubits: List[int] = field(default_factory=list)
    global_phase: complex = 1.0 + 0.0j
    next_label: int = 0
    tape: Optional[GateTape] = None
    symbolic: bool = False
    peak_width: int = 0

    @property
    def width(self) -> int:
        return len(self.live_qubits)

    def note_width(self) -> None:
        self.peak_width = max(self.peak_width, self.width)

    def position(self, label: int) -> int:
        try:
            return self.live_qubits.index(label)
        except ValueError as exc:
            raise UsageError(f"Qubit {label} is not live.") from exc

    def positions(self, labels) -> List[int]:
        labels = list(labels)
        if len(set(labels)) != len(labels):
            raise UsageError(f"Qubit labels must be distinct, got {labels}.")
        return [self.position(label) for label in labels]

    def norm(self) -> float:
        if self.symbolic:
            return 1.0
        return float(np.linalg.norm(self.amplitudes))

    def record(self, name: str, *labels: int) -> None:
        if self.tape is not None:
            self.tape.record(name, tuple(labels))

    def copy(self, keep_tape: bool = False) -> "Statevector":
        return Statevector(
            amplitudes=self.amplitudes.copy(),
            live_qubits=list(self.live_qubits),
            global_phase=self.global_phase,
            next_label=self.next_label,
            tape=self.tape if keep_tape else None,
            symbolic=self.symbolic,
            peak_width=self.peak_width,
        )

    def to_dict(self) -> dict:
        data = {"live_qubits": list(self.live_qubits), "symbolic": self.symbolic}
        if not self.symbolic:
            data["amplitudes"] = [[float(a.real), float(a.imag)] for a in self.amplitudes]
        return data


@dataclass(frozen=True)
class MeasurementOutcome:
    qubit: int
    basis: str
    bit: int

    def __post_init__(self) -> None:
        if self.basis not in MEASUREMENT_BASES:
            raise UsageError(f"Measurement basis must be X or Z, got '{self.basis}'.")
        if self.bit not in (0, 1):
            raise UsageError(f"Measurement bit must be 0 or 1, got {self.bit}.")

    def to_line(self) -> str:
        return f"{self.qubit},{self.basis},{self.bit}"

    @classmethod
    def from_line(cls, line: str) -> "MeasurementOutcome":
        try:
            qubit, basis, bit = line.strip().split(",")
            return cls(qubit=int(qubit), basis=basis, bit=int(bit))
        except ValueError as exc:
            raise UsageError(f"Malformed outcome line '{line}'.") from exc

    def to_dict(self) -> dict:
        return {"qubit": self.qubit, "basis": self.basis, "bit": self.bit}
