from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from constants.report_constants import LEDGER_PHASES, PHASE_CONSUME
from constants.sim_constants import TAPE_GATES
from services.errors import SimulatorInternalError


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: Tuple[int, ...]

    @classmethod
    def of(cls, name: str, *qubits: int) -> "Gate":
        return cls(name=name.upper(), qubits=tuple(int(q) for q in qubits))

    @classmethod
    def from_dict(cls, data: dict) -> "Gate":
        return cls(name=str(data.get("name", "")).upper(), qubits=tuple(data.get("qubits") or ()))

    def to_dict(self) -> dict:
        return {"name": self.name, "qubits": list(self.qubits)}


@dataclass
class TapeEvent:
    gate: Gate
    phase: str


@dataclass
class GateTape:
    """
    Ordered record of every gate, allocation and measurement a run performs.
    Each event carries the ledger phase that was active when it was recorded.
    """

    events: List[TapeEvent] = field(default_factory=list)
    phase: str = PHASE_CONSUME
    total_events: int = 0

    def record(self, name: str, qubits: Tuple[int, ...]) -> None:
        if name not in TAPE_GATES:
            raise SimulatorInternalError(f"Cannot record unknown event '{name}'.")
        self.events.append(TapeEvent(gate=Gate(name=name, qubits=tuple(qubits)), phase=self.phase))
        self.total_events += 1

    @contextmanager
    def in_phase(self, phase: str) -> Iterator["GateTape"]:
        if phase not in LEDGER_PHASES:
            raise ValueError(f"Unknown ledger phase '{phase}'.")
        previous = self.phase
        self.phase = phase
        try:
            yield self
        finally:
            self.phase = previous

    def gates(self, phase: Optional[str] = None) -> List[Gate]:
        return [event.gate for event in self.events if phase is None or event.phase == phase]

    def phase_counts(self) -> Dict[str, int]:
        counts = {phase: 0 for phase in LEDGER_PHASES}
        for event in self.events:
            counts[event.phase] = counts.get(event.phase, 0) + 1
        return counts
