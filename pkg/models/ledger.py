from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional, Tuple

from services.errors import UsageError


@dataclass(frozen=True)
class GateCountLedger:
    """
    Gate counts for one accounting phase.

    `merge` is sequential composition: counts, ticks and depths add,
    peak width takes the maximum.
    """

    clifford_1q: int = 0
    clifford_2q: int = 0
    t_count: int = 0
    measurements: int = 0
    identity_ticks: int = 0
    depth: int = 0
    peak_width: int = 0
    analytic_depth: int = 0

    def __post_init__(self) -> None:
        for item in fields(self):
            if getattr(self, item.name) < 0:
                raise UsageError(f"Ledger field {item.name} must be nonnegative.")

    @classmethod
    def zero(cls) -> "GateCountLedger":
        return cls()

    def merge(self, other: "GateCountLedger") -> "GateCountLedger":
        return GateCountLedger(
            clifford_1q=self.clifford_1q + other.clifford_1q,
            clifford_2q=self.clifford_2q + other.clifford_2q,
            t_count=self.t_count + other.t_count,
            measurements=self.measurements + other.measurements,
            identity_ticks=self.identity_ticks + other.identity_ticks,
            depth=self.depth + other.depth,
            peak_width=max(self.peak_width, other.peak_width),
            analytic_depth=self.analytic_depth + other.analytic_depth,
        )

    @property
    def gate_count(self) -> int:
        return self.clifford_1q + self.clifford_2q + self.t_count + self.measurements

    @property
    def total(self) -> int:
        """Gate complexity with storage counted as identity gates."""
        return self.gate_count + self.identity_ticks

    def to_dict(self) -> dict:
        return {item.name: getattr(self, item.name) for item in fields(self)}

    def to_row(self) -> Tuple[int, ...]:
        return (
            self.clifford_1q,
            self.clifford_2q,
            self.t_count,
            self.measurements,
            self.identity_ticks,
            self.depth,
            self.peak_width,
        )


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    intercept: float
    r_squared: float
    points: Tuple[Tuple[float, float], ...]

    def __post_init__(self) -> None:
        if len(self.points) < 3:
            raise UsageError("A scaling fit needs at least three points.")
        if not 0.0 <= self.r_squared <= 1.0:
            raise UsageError(f"r_squared must lie in [0, 1], got {self.r_squared}.")

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "points": [list(point) for point in self.points],
        }


@dataclass(frozen=True)
class TaskInstance:
    """Which data is known at precomputation time and which arrives at run time."""

    early_input: Dict[str, str] = field(default_factory=dict)
    late_input: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        overlap = set(self.early_input) & set(self.late_input)
        if overlap:
            raise UsageError(f"Early and late inputs overlap on {sorted(overlap)}.")

    def to_dict(self) -> dict:
        return {
            "early_input": dict(self.early_input),
            "late_input": dict(self.late_input),
            "outputs": dict(self.outputs),
        }


@dataclass
class ClassicalOpCounter:
    """Counts monomial-set XORs done by the classical outcome processing."""

    count: int = 0
    by_step: Optional[List[int]] = None

    def add(self, amount: int) -> None:
        self.count += amount
        if self.by_step is not None:
            self.by_step.append(amount)
