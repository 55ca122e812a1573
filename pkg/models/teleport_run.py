from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from models.ledger import GateCountLedger
from models.statevector import Statevector
from models.transcript import Transcript


@dataclass
class TeleportRun:
    """One corrected Clifford teleportation with its per-phase ledgers."""

    n: int
    state: Statevector
    transcript: Transcript
    consume_ledger: GateCountLedger
    prep_ledger: GateCountLedger
    output: List[int] = field(default_factory=list)
    trace_distance_to_direct: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "transcript": self.transcript.to_dict(),
            "ledgers": {
                "consume": self.consume_ledger.to_dict(),
                "prep": self.prep_ledger.to_dict(),
            },
            "trace_distance_to_direct": self.trace_distance_to_direct,
        }
