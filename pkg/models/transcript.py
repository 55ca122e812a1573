from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

from models.pauli_string import PauliString
from models.statevector import MeasurementOutcome


@dataclass
class Transcript:
    """
    Classical record of a teleportation run.

    Byproducts are appended in the order the gadgets produce them; for a
    selective gadget that is P2 (acts before the chosen unitary) then P1.
    """

    outcomes: List[MeasurementOutcome] = field(default_factory=list)
    byproducts: List[PauliString] = field(default_factory=list)
    choices: List[int] = field(default_factory=list)

    def extend(self, other: "Transcript") -> None:
        self.outcomes.extend(other.outcomes)
        self.byproducts.extend(other.byproducts)
        self.choices.extend(other.choices)

    def to_lines(self) -> List[str]:
        lines = [outcome.to_line() for outcome in self.outcomes]
        lines.extend(byproduct.to_text() for byproduct in self.byproducts)
        return lines

    @classmethod
    def from_dict(cls, data: dict) -> "Transcript":
        return cls(
            outcomes=[MeasurementOutcome.from_line(line) for line in data.get("outcomes") or []],
            byproducts=[PauliString.from_text(text) for text in data.get("byproducts") or []],
            choices=[int(bit) for bit in data.get("choices") or []],
        )

    def to_dict(self) -> dict:
        return {
            "outcomes": [outcome.to_line() for outcome in self.outcomes],
            "byproducts": [byproduct.to_text() for byproduct in self.byproducts],
            "choices": list(self.choices),
        }
