from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import FrozenSet, Iterable, List, Tuple

from services.errors import UsageError

Monomial = Tuple[int, ...]


def canonical_monomial(qubits: Iterable[int]) -> Monomial:
    monomial = tuple(sorted(int(q) for q in qubits))
    if len(set(monomial)) != len(monomial):
        raise UsageError(f"Monomial {monomial} repeats a qubit.")
    return monomial


def monomial_order(monomial: Monomial) -> Tuple[int, Monomial]:
    return len(monomial), monomial


@dataclass(frozen=True)
class ZkElement:
    """
    Element of the diagonal group generated by ±I, Z and multi-controlled Z.

    The diagonal entry at basis index b is
        sign * prod over monomials S of (-1)^(AND of the bits of b on S).
    Monomials are sorted qubit tuples; `k` is the declared level bound.
    """

    n: int
    sign: int
    monomials: FrozenSet[Monomial]
    k: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise UsageError(f"Sign must be +1 or -1, got {self.sign}.")
        if self.k < 0:
            raise UsageError(f"Level bound must be >= 0, got {self.k}.")
        for monomial in self.monomials:
            if not monomial:
                raise UsageError("Monomials must be nonempty.")
            if monomial != canonical_monomial(monomial):
                raise UsageError(f"Monomial {monomial} is not in sorted form.")
            if len(monomial) > self.k:
                raise UsageError(f"Monomial {monomial} exceeds level bound {self.k}.")
            if monomial[0] < 0 or monomial[-1] >= self.n:
                raise UsageError(f"Monomial {monomial} is outside [0, {self.n}).")

    @classmethod
    def identity(cls, n: int, k: int = 0) -> "ZkElement":
        return cls(n=n, sign=1, monomials=frozenset(), k=k)

    @classmethod
    def from_monomials(cls, n: int, monomials: Iterable[Iterable[int]], sign: int = 1, k: int = -1) -> "ZkElement":
        """Build from monomials, cancelling repeats pairwise (Z^2 = I)."""
        present: set = set()
        for qubits in monomials:
            present ^= {canonical_monomial(qubits)}
        level = max((len(m) for m in present), default=0)
        return cls(n=n, sign=sign, monomials=frozenset(present), k=max(k, level))

    @property
    def level(self) -> int:
        return max((len(m) for m in self.monomials), default=0)

    @property
    def sorted_monomials(self) -> List[Monomial]:
        return sorted(self.monomials, key=monomial_order)

    def is_identity(self, ignore_sign: bool = False) -> bool:
        return not self.monomials and (ignore_sign or self.sign == 1)

    def to_text(self) -> str:
        parts = ["+" if self.sign == 1 else "-"]
        parts.extend(",".join(str(q) for q in monomial) for monomial in self.sorted_monomials)
        return ";".join(parts)

    @classmethod
    def from_text(cls, text: str, n: int, k: int = -1) -> "ZkElement":
        parts = text.strip().split(";")
        if not parts or parts[0] not in ("+", "-"):
            raise UsageError(f"Malformed element text '{text}'.")
        monomials = [[int(q) for q in part.split(",")] for part in parts[1:] if part]
        return cls.from_monomials(n, monomials, sign=1 if parts[0] == "+" else -1, k=k)

    def to_bits(self) -> List[int]:
        """Sign bit, then one presence bit per candidate monomial of size 1..k in canonical order."""
        bits = [0 if self.sign == 1 else 1]
        for size in range(1, self.k + 1):
            for monomial in combinations(range(self.n), size):
                bits.append(int(monomial in self.monomials))
        return bits

    def payload_bound(self) -> int:
        return sum(comb(self.n, j) for j in range(self.k + 1)) + 1

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "text": self.to_text(), "level": self.level}
