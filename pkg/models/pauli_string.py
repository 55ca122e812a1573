from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

from services.errors import UsageError

# `phase` is the exponent e of i**e, so 0 -> +1, 1 -> +i, 2 -> -1, 3 -> -i.
PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}
TEXT_PHASE = {text: exponent for exponent, text in PHASE_TEXT.items()}


@dataclass(frozen=True)
class PauliString:
    """
    Signed Pauli operator  i**phase * (X^x0 Z^z0) ⊗ (X^x1 Z^z1) ⊗ ...

    Each factor is written X before Z, so Y = i·X·Z is (x=1, z=1, phase=1).
    """

    n: int
    x_bits: Tuple[int, ...]
    z_bits: Tuple[int, ...]
    phase: int = 0

    def __post_init__(self) -> None:
        if len(self.x_bits) != self.n or len(self.z_bits) != self.n:
            raise UsageError(f"Pauli bit vectors must have length {self.n}.")
        if any(bit not in (0, 1) for bit in self.x_bits + self.z_bits):
            raise UsageError("Pauli bit vectors must contain only 0/1.")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n=n, x_bits=(0,) * n, z_bits=(0,) * n)

    @classmethod
    def from_bits(cls, x_bits: Iterable[int], z_bits: Iterable[int], phase: int = 0) -> "PauliString":
        x_bits = tuple(int(b) for b in x_bits)
        z_bits = tuple(int(b) for b in z_bits)
        return cls(n=len(x_bits), x_bits=x_bits, z_bits=z_bits, phase=phase)

    @classmethod
    def single(cls, n: int, qubit: int, label: str) -> "PauliString":
        """One-qubit X, Z or Y on `qubit` of an n-qubit register."""
        x_bits = [0] * n
        z_bits = [0] * n
        label = label.upper()
        if label not in ("X", "Y", "Z"):
            raise UsageError(f"Unknown Pauli label '{label}'.")
        x_bits[qubit] = int(label in ("X", "Y"))
        z_bits[qubit] = int(label in ("Z", "Y"))
        return cls(n=n, x_bits=tuple(x_bits), z_bits=tuple(z_bits), phase=1 if label == "Y" else 0)

    @classmethod
    def x_on(cls, n: int, support: Iterable[int]) -> "PauliString":
        support = set(support)
        return cls(n=n, x_bits=tuple(int(i in support) for i in range(n)), z_bits=(0,) * n)

    @property
    def phase_value(self) -> complex:
        return 1j ** self.phase

    @property
    def x_support(self) -> Tuple[int, ...]:
        return tuple(i for i, bit in enumerate(self.x_bits) if bit)

    @property
    def z_support(self) -> Tuple[int, ...]:
        return tuple(i for i, bit in enumerate(self.z_bits) if bit)

    def is_identity(self, ignore_phase: bool = True) -> bool:
        trivial = not any(self.x_bits) and not any(self.z_bits)
        return trivial and (ignore_phase or self.phase == 0)

    def to_text(self) -> str:
        x_text = "".join(str(b) for b in self.x_bits)
        z_text = "".join(str(b) for b in self.z_bits)
        return f"{PHASE_TEXT[self.phase]};{x_text};{z_text}"

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        try:
            sign, x_text, z_text = text.strip().split(";")
            return cls.from_bits([int(c) for c in x_text], [int(c) for c in z_text], TEXT_PHASE[sign])
        except (KeyError, ValueError) as exc:
            raise UsageError(f"Malformed Pauli text '{text}'.") from exc

    def to_dict(self) -> dict:
        return {"text": self.to_text()}
