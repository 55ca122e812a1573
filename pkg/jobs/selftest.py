"""
Self-test: re-derive the selective byproduct tables, check the commutation
identities on random elements and calibrate the DME budget constant.

Example:
  python -m jobs.selftest --seed 0
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

from constants.report_constants import EXIT_SUCCESS, EXIT_VERIFICATION_FAILURE
from jobs.cli_support import add_output_arguments, configure_logging, guarded
from models.run_config import RunConfig
from services.report_writer import check_output_path, emit, to_json_text
from services.selftest_service import run_selftest
from services.teleport_service import CHOICE_A, frozen_tables

logger = logging.getLogger(__name__)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selftest",
        description="Run the built-in consistency checks.",
    )
    parser.add_argument(
        "--samples",
        type=int,
        default=1000,
        help="Random elements for the commutation suite (default: 1000).",
    )
    parser.add_argument("--eps", type=float, default=0.1, help="DME calibration accuracy (default: 0.1).")
    parser.add_argument("--corrupt-table", action="store_true", help=argparse.SUPPRESS)
    add_output_arguments(parser)
    return parser


def corrupted_tables() -> dict:
    """Frozen tables with the destination gadget's byproduct roles swapped."""
    tables = frozen_tables()
    rule = tables["destination"][CHOICE_A]["byproduct"]
    rule["x"], rule["z"] = rule["z"], rule["x"]
    return tables


def run_cli(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    configure_logging()
    args = _build_parser().parse_args(argv)

    def body() -> int:
        config = RunConfig(
            subcommand="selftest",
            seed=args.seed,
            eps=args.eps,
            out_path=args.out,
            format=args.format,
            force=args.force,
        )
        check_output_path(config.out_path, config.force)
        tables = corrupted_tables() if args.corrupt_table else None
        report = run_selftest(config.seed, tables=tables, samples=max(0, args.samples), eps=config.eps)
        emit(to_json_text(report.to_dict()), config.out_path, config.force)

        for name, messages in report.failures.items():
            for message in messages:
                sys.stderr.write(f"{name}: {message}\n")
        if not report.passed:
            logger.error("Selftest failed.")
            return EXIT_VERIFICATION_FAILURE
        logger.info("Selftest passed (budget constant C=%s).", report.budget_constant)
        return EXIT_SUCCESS

    return guarded(body)


if __name__ == "__main__":
    sys.exit(run_cli())
