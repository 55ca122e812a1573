"""
Argument and exit-code plumbing shared by the job scripts.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Iterable, Iterator, Sequence

from constants.report_constants import (
    EXIT_USAGE_ERROR,
    EXIT_VERIFICATION_FAILURE,
    FORMAT_JSON,
    OUTPUT_FORMATS,
)
from services.errors import EnvelopeConfigError, UsageError, VerificationError

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s - %(message)s"

logger = logging.getLogger(__name__)


def configure_logging(level: int = logging.INFO) -> None:
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def add_output_arguments(parser: argparse.ArgumentParser, default_format: str = FORMAT_JSON) -> None:
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="Master seed; per-trial seeds are spawned from it (default: 0).",
    )
    parser.add_argument(
        "--out",
        type=str,
        default=None,
        help="Write the report to this file instead of stdout.",
    )
    parser.add_argument(
        "--format",
        choices=OUTPUT_FORMATS,
        default=default_format,
        help=f"Report format (default: {default_format}).",
    )
    parser.add_argument(
        "--force",
        action="store_true",
        help="Overwrite --out if it already exists.",
    )


def guarded(run: Callable[[], int]) -> int:
    """Run a job body, mapping library errors to CLI exit codes."""
    try:
        return run()
    except (UsageError, EnvelopeConfigError) as exc:
        logger.error("Usage error: %s", exc)
        return EXIT_USAGE_ERROR
    except VerificationError as exc:
        logger.error("Verification failed: %s", exc)
        return EXIT_VERIFICATION_FAILURE


def trial_ledger_rows(trials: Iterable[dict], phases: Sequence[str]) -> Iterator[tuple]:
    """One CSV row per (trial, phase) from trial dicts carrying `ledgers` and `trace_distance`."""
    for result in trials:
        for phase in phases:
            ledger = result["ledgers"][phase]
            yield (
                result["trial"],
                phase,
                ledger["clifford_1q"],
                ledger["clifford_2q"],
                ledger["t_count"],
                ledger["measurements"],
                ledger["identity_ticks"],
                ledger["depth"],
                ledger["peak_width"],
                "" if result["trace_distance"] is None else result["trace_distance"],
            )
