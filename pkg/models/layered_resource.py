from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from models.gate import Gate
from models.ledger import GateCountLedger
from models.pauli_string import PauliString
from models.resource_state import ResourceState
from models.statevector import Statevector
from models.transcript import Transcript
from models.zk_element import ZkElement

Path = Tuple[int, ...]


@dataclass
class GadgetGroup:
    """One selective gate gadget of the cascade: fires `candidate` (choice A) or identity (choice B)."""

    path: Path
    candidate: ZkElement
    circuit: List[Gate]

    @property
    def layer(self) -> int:
        return len(self.path)

    def to_dict(self) -> dict:
        return {"path": list(self.path), "candidate": self.candidate.to_text()}


@dataclass
class LayeredResource:
    """
    Base |Γ(U)⟩ plus the staged correction gadgets.

    `layers[l - 1]` holds the n**l groups of layer l in lexicographic path
    order. Gadget qubits are only allocated when consumed; `prep_ledger`
    counts the full staged preparation.
    """

    u: ZkElement
    base: ResourceState
    layers: List[List[GadgetGroup]]
    stop_level: int
    prep_ledger: GateCountLedger
    staged_width: int = 0
    staged_gadget_events: int = 0
    consumed: bool = False
    candidates: Dict[Path, ZkElement] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.u.n

    @property
    def gadget_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def to_dict(self) -> dict:
        return {
            "u": self.u.to_text(),
            "n": self.n,
            "k": self.u.k,
            "a": self.stop_level,
            "layers": [len(layer) for layer in self.layers],
            "staged_width": self.staged_width,
            "prep_ledger": self.prep_ledger.to_dict(),
            "consumed": self.consumed,
        }


@dataclass
class ProtocolResult:
    state: Statevector
    transcript: Transcript
    residual: ZkElement
    final_pauli: PauliString
    consume_ledger: GateCountLedger
    prep_ledger: GateCountLedger
    classical_op_count: int
    output: List[int] = field(default_factory=list)
    trace_distance_to_direct: Optional[float] = None
    peak_live_width: int = 0
    event_counts: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "transcript": self.transcript.to_dict(),
            "residual": self.residual.to_text(),
            "residual_level": self.residual.level,
            "final_pauli": self.final_pauli.to_text(),
            "ledgers": {
                "consume": self.consume_ledger.to_dict(),
                "prep": self.prep_ledger.to_dict(),
            },
            "classical_op_count": self.classical_op_count,
            "trace_distance_to_direct": self.trace_distance_to_direct,
            "peak_live_width": self.peak_live_width,
            "event_counts": dict(self.event_counts),
        }
