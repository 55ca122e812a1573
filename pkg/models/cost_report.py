from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from constants.report_constants import PHASE_CONSUME, PHASE_PREP, PHASE_STANDARD
from models.ledger import GateCountLedger, ScalingFit, TaskInstance

FIT_COLUMNS = (PHASE_STANDARD, PHASE_CONSUME, PHASE_PREP, "classical_ops")


@dataclass
class CostTableEntry:
    """All costs measured at one problem size."""

    n: int
    k: int
    a: int
    standard: GateCountLedger
    consume: GateCountLedger
    prep: GateCountLedger
    resource_width: int
    classical_ops: float
    verified: bool = False
    max_trace_distance: Optional[float] = None
    mean_totals: Dict[str, float] = field(default_factory=dict)

    def ledger(self, phase: str) -> GateCountLedger:
        return {PHASE_STANDARD: self.standard, PHASE_CONSUME: self.consume, PHASE_PREP: self.prep}[phase]

    def csv_rows(self) -> List[Tuple]:
        return [
            (self.n, self.k, self.a, phase, *self.ledger(phase).to_row(), self.classical_ops)
            for phase in (PHASE_STANDARD, PHASE_CONSUME, PHASE_PREP)
        ]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "a": self.a,
            "ledgers": {
                PHASE_STANDARD: self.standard.to_dict(),
                PHASE_CONSUME: self.consume.to_dict(),
                PHASE_PREP: self.prep.to_dict(),
            },
            "resource_width": self.resource_width,
            "classical_ops": self.classical_ops,
            "verified": self.verified,
            "max_trace_distance": self.max_trace_distance,
            "mean_totals": dict(self.mean_totals),
        }


@dataclass
class CostTableReport:
    family: str
    k: int
    a: int
    seeds: List[int]
    entries: List[CostTableEntry] = field(default_factory=list)
    fits: Dict[str, Optional[ScalingFit]] = field(default_factory=dict)
    task: Optional[TaskInstance] = None

    @property
    def max_trace_distance(self) -> Optional[float]:
        distances = [e.max_trace_distance for e in self.entries if e.max_trace_distance is not None]
        return max(distances) if distances else None

    def csv_rows(self) -> List[Tuple]:
        return [row for entry in self.entries for row in entry.csv_rows()]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "k": self.k,
            "a": self.a,
            "seeds": list(self.seeds),
            "rows": [entry.to_dict() for entry in self.entries],
            "fits": {column: (fit.to_dict() if fit is not None else None) for column, fit in self.fits.items()},
            "task": self.task.to_dict() if self.task is not None else None,
            "max_trace_distance": self.max_trace_distance,
        }
