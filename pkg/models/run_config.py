from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from constants.report_constants import FORMAT_JSON, OUTPUT_FORMATS, SUBCOMMANDS
from services.errors import UsageError


def parse_n_range(text: str) -> Tuple[int, ...]:
    """'5' -> (5,), '2..8' -> (2, ..., 8); an empty range is an error."""
    text = (text or "").strip()
    try:
        if ".." in text:
            low_text, high_text = text.split("..", 1)
            low, high = int(low_text), int(high_text)
            values = tuple(range(low, high + 1))
        else:
            values = (int(text),)
    except ValueError as exc:
        raise UsageError(f"--n must be an integer or a range 'a..b', got '{text}'.") from exc
    if not values:
        raise UsageError(f"--n range '{text}' is empty.")
    return values


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    n: int = 2
    k: int = 2
    a: Optional[int] = None
    trials: int = 1
    seed: int = 0
    out_path: Optional[str] = None
    format: str = FORMAT_JSON
    force: bool = False
    t: float = math.pi
    eps: float = 0.1
    require_verify: bool = False
    n_values: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"Unknown subcommand '{self.subcommand}'.")
        if self.format not in OUTPUT_FORMATS:
            raise UsageError(f"--format must be one of {OUTPUT_FORMATS}, got '{self.format}'.")
        if self.trials < 1:
            raise UsageError(f"--trials must be >= 1, got {self.trials}.")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError(f"--seed must be a 64-bit unsigned integer, got {self.seed}.")
        validator = getattr(self, "_validate_" + self.subcommand.replace("-", "_"))
        validator()

    def _validate_teleport(self) -> None:
        if self.n < 1:
            raise UsageError(f"--n must be >= 1, got {self.n}.")

    def _validate_zk_run(self) -> None:
        if not 1 <= self.k <= self.n:
            raise UsageError(f"zk-run needs 1 <= k <= n, got n={self.n}, k={self.k}.")
        if self.a is not None:
            upper = max(self.k - 1, 1)
            if not 1 <= self.a <= upper:
                raise UsageError(f"zk-run needs 1 <= a <= {upper} for k={self.k}, got a={self.a}.")

    def _validate_dme_sweep(self) -> None:
        if not math.isfinite(self.t):
            raise UsageError("--t must be finite.")
        if not 1 <= self.n <= 4:
            raise UsageError(f"dme-sweep supports 1..4 target qubits, got {self.n}.")

    def _validate_cost_table(self) -> None:
        if not self.n_values:
            raise UsageError("cost-table needs a nonempty --n range.")
        if min(self.n_values) < 1:
            raise UsageError("cost-table sizes must be >= 1.")

    def _validate_selftest(self) -> None:
        if self.eps <= 0:
            raise UsageError(f"--eps must be > 0, got {self.eps}.")

    @property
    def stop_level(self) -> int:
        return self.a if self.a is not None else max(1, self.k // 2)

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "n": list(self.n_values) if self.n_values else self.n,
            "k": self.k,
            "a": self.stop_level,
            "trials": self.trials,
            "seed": self.seed,
            "format": self.format,
            "t": self.t,
            "eps": self.eps,
            "require_verify": self.require_verify,
        }
