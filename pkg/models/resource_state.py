from __future__ import annotations

from dataclasses import dataclass
from typing import List

from models.statevector import Statevector
from services.errors import UsageError


@dataclass
class ResourceState:
    """|Γ(U)⟩: n Bell pairs with U applied to the output halves."""

    state: Statevector
    n: int
    input_half: List[int]
    output_half: List[int]
    unitary_tag: str = "I"

    def __post_init__(self) -> None:
        if len(self.input_half) != self.n or len(self.output_half) != self.n:
            raise UsageError(f"Resource halves must both have {self.n} qubits.")
        if set(self.input_half) & set(self.output_half):
            raise UsageError("Resource halves must be disjoint.")
        for label in self.input_half + self.output_half:
            self.state.position(label)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "input_half": list(self.input_half),
            "output_half": list(self.output_half),
            "unitary_tag": self.unitary_tag,
        }
