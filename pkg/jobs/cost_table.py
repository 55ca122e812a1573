"""
Standard vs precomputation cost table over a range of sizes, with fitted exponents.

Example:
  python -m jobs.cost_table --k 2 --n 2..8 --format csv --out table.csv
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

from constants.report_constants import COST_TABLE_CSV_HEADER, EXIT_SUCCESS, FORMAT_CSV
from constants.sim_constants import PROTOCOL_TOLERANCE
from jobs.cli_support import add_output_arguments, configure_logging, guarded
from models.run_config import RunConfig, parse_n_range
from services.cost_table_service import FAMILIES, FAMILY_ZK, fit_summary, table1_report
from services.envelope import load_envelope
from services.errors import VerificationError
from services.report_writer import check_output_path, emit, to_csv_text, to_json_text

logger = logging.getLogger(__name__)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cost-table",
        description="Gate, width and classical costs per size with power-law fits.",
    )
    parser.add_argument("--n", type=str, default="2..8", help="Size or range 'a..b' (default: 2..8).")
    parser.add_argument("--k", type=int, default=2, help="Level bound of u (default: 2).")
    parser.add_argument("--a", type=int, default=None, help="Stop level (default: max(1, k // 2)).")
    parser.add_argument("--trials", type=int, default=1, help="Seeds averaged per size (default: 1).")
    parser.add_argument(
        "--family",
        choices=FAMILIES,
        default=FAMILY_ZK,
        help="Diagonal elements (zk) or random Clifford circuits (clifford) (default: zk).",
    )
    add_output_arguments(parser)
    return parser


def run_cli(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    configure_logging()
    args = _build_parser().parse_args(argv)

    def body() -> int:
        config = RunConfig(
            subcommand="cost-table",
            k=args.k,
            a=args.a,
            trials=args.trials,
            seed=args.seed,
            out_path=args.out,
            format=args.format,
            force=args.force,
            n_values=parse_n_range(args.n),
        )
        check_output_path(config.out_path, config.force)
        envelope = load_envelope()
        seeds = [config.seed + offset for offset in range(config.trials)]
        report = table1_report(config.n_values, config.k, config.stop_level, seeds, envelope, args.family)

        if config.format == FORMAT_CSV:
            emit(to_csv_text(COST_TABLE_CSV_HEADER, report.csv_rows()), config.out_path, config.force)
        else:
            payload = report.to_dict()
            payload["config"] = config.to_dict()
            emit(to_json_text(payload), config.out_path, config.force)
        logger.info("Cost table completed (family=%s, exponents=%s).", args.family, fit_summary(report))

        max_distance = report.max_trace_distance
        if max_distance is not None and max_distance > PROTOCOL_TOLERANCE:
            raise VerificationError(f"max trace distance {max_distance:.3e} exceeds {PROTOCOL_TOLERANCE}.")
        return EXIT_SUCCESS

    return guarded(body)


if __name__ == "__main__":
    sys.exit(run_cli())
