from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from models.pauli_string import PauliString
from services.errors import UsageError


@dataclass(frozen=True)
class CliffordTableau:
    """Images U X_i U† and U Z_i U† of the 2n Pauli generators under a Clifford U."""

    n: int
    x_images: Tuple[PauliString, ...]
    z_images: Tuple[PauliString, ...]

    def __post_init__(self) -> None:
        if len(self.x_images) != self.n or len(self.z_images) != self.n:
            raise UsageError(f"Tableau needs {self.n} X images and {self.n} Z images.")
        if any(image.n != self.n for image in self.x_images + self.z_images):
            raise UsageError("Tableau images must act on the tableau width.")

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        return cls(
            n=n,
            x_images=tuple(PauliString.single(n, i, "X") for i in range(n)),
            z_images=tuple(PauliString.single(n, i, "Z") for i in range(n)),
        )

    @classmethod
    def from_dict(cls, data: dict) -> "CliffordTableau":
        x_images = tuple(PauliString.from_text(text) for text in data.get("x_images") or [])
        z_images = tuple(PauliString.from_text(text) for text in data.get("z_images") or [])
        return cls(n=int(data.get("n", len(x_images))), x_images=x_images, z_images=z_images)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "x_images": [image.to_text() for image in self.x_images],
            "z_images": [image.to_text() for image in self.z_images],
        }
