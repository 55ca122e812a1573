from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from constants.report_constants import DEFAULT_BUDGET_CONSTANT
from services.errors import UsageError


@dataclass(frozen=True)
class DmeConfig:
    t: float
    m: int = 1
    budget_constant: float = DEFAULT_BUDGET_CONSTANT

    def __post_init__(self) -> None:
        if self.m < 1:
            raise UsageError(f"Copy count m must be >= 1, got {self.m}.")
        if not math.isfinite(self.t):
            raise UsageError("Evolution time t must be a finite real.")
        if self.budget_constant <= 0:
            raise UsageError(f"Budget constant must be > 0, got {self.budget_constant}.")

    def copies_for(self, t: float, eps: float) -> int:
        """m = ceil(C * t^2 / eps)."""
        if eps <= 0:
            raise UsageError(f"eps must be > 0, got {eps}.")
        return max(1, math.ceil(self.budget_constant * t * t / eps))

    def to_dict(self) -> dict:
        return {"t": self.t, "m": self.m, "budget_constant": self.budget_constant}


@dataclass(frozen=True)
class DmeSweepRow:
    m: int
    t: float
    mean_error: float
    std_error: float
    n_probes: int
    seed: Optional[int] = None

    def to_row(self) -> Tuple:
        return (self.m, self.t, self.mean_error, self.std_error, self.n_probes, "" if self.seed is None else self.seed)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "t": self.t,
            "mean_error": self.mean_error,
            "std_error": self.std_error,
            "n_probes": self.n_probes,
            "seed": self.seed,
        }
