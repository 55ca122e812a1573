"""
Deterministic JSON/CSV emission for CLI reports.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from constants.report_constants import JSON_FLOAT_DIGITS
from services.errors import UsageError

logger = logging.getLogger(__name__)


def round_floats(value: Any, digits: int = JSON_FLOAT_DIGITS) -> Any:
    """Recursively round floats to `digits` significant digits; numpy scalars become Python ones."""
    if isinstance(value, dict):
        return {str(key): round_floats(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(item, digits) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if not np.isfinite(number):
            return None
        return float(f"{number:.{digits}g}")
    return value


def to_json_text(payload: Any) -> str:
    return json.dumps(round_floats(payload), indent=2, sort_keys=True) + "\n"


def to_csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(round_floats(list(row)))
    return buffer.getvalue()


def check_output_path(out_path: Optional[str], force: bool) -> None:
    """Refuse to overwrite an existing file unless forced; run before any work starts."""
    if out_path and Path(out_path).exists() and not force:
        raise UsageError(f"Output file {out_path} exists; pass --force to overwrite.")


def emit(text: str, out_path: Optional[str] = None, force: bool = False) -> None:
    if not out_path:
        sys.stdout.write(text)
        return
    check_output_path(out_path, force)
    path = Path(out_path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote report to %s.", path)
