"""
Sweep the DME copy count m and report the trace-distance error to exact evolution.

Example:
  python -m jobs.dme_sweep --t 3.14159 --m 50,100,200,400 --out sweep.csv
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from typing import List, Optional, Tuple

import numpy as np
from dotenv import load_dotenv

from constants.report_constants import DEFAULT_DME_M_VALUES, DME_SWEEP_CSV_HEADER, EXIT_SUCCESS, FORMAT_CSV
from jobs.cli_support import add_output_arguments, configure_logging, guarded
from models.dme_config import DmeSweepRow
from models.ledger import ScalingFit
from models.run_config import RunConfig
from services.dme_service import error_sweep, random_pure_density, sweep_slope
from services.errors import UsageError
from services.report_writer import check_output_path, emit, to_csv_text, to_json_text

logger = logging.getLogger(__name__)


def _parse_m_values(text: str) -> Tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise UsageError(f"--m must be a comma separated list of integers, got '{text}'.") from exc
    if not values:
        raise UsageError("--m must name at least one copy count.")
    if min(values) < 1:
        raise UsageError(f"Copy counts must be >= 1, got {min(values)}.")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dme-sweep",
        description="Density matrix exponentiation error versus copy count.",
    )
    parser.add_argument("--n", type=int, default=1, help="Target qubits (default: 1).")
    parser.add_argument("--t", type=float, default=math.pi, help="Evolution time (default: pi).")
    parser.add_argument(
        "--m",
        type=str,
        default=",".join(str(m) for m in DEFAULT_DME_M_VALUES),
        help="Comma separated copy counts (default: %(default)s).",
    )
    parser.add_argument("--trials", type=int, default=5, help="Random probe states (default: 5).")
    add_output_arguments(parser, default_format=FORMAT_CSV)
    return parser


def run_sweep(config: RunConfig, m_values: Tuple[int, ...]) -> Tuple[List[DmeSweepRow], Optional[ScalingFit]]:
    rng = np.random.default_rng(config.seed)
    rho = random_pure_density(config.n, rng)
    probes = [random_pure_density(config.n, rng) for _ in range(config.trials)]
    rows = error_sweep(rho, config.t, m_values, probes, seed=config.seed)
    return rows, sweep_slope(rows)


def run_cli(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    configure_logging()
    args = _build_parser().parse_args(argv)

    def body() -> int:
        config = RunConfig(
            subcommand="dme-sweep",
            n=args.n,
            t=args.t,
            trials=args.trials,
            seed=args.seed,
            out_path=args.out,
            format=args.format,
            force=args.force,
        )
        m_values = _parse_m_values(args.m)
        check_output_path(config.out_path, config.force)

        rows, fit = run_sweep(config, m_values)
        summary = {
            "config": config.to_dict(),
            "m_values": list(m_values),
            "rows": [row.to_dict() for row in rows],
            "fit": fit.to_dict() if fit is not None else None,
            "slope": fit.exponent if fit is not None else None,
        }
        if config.format == FORMAT_CSV:
            emit(to_csv_text(DME_SWEEP_CSV_HEADER, (row.to_row() for row in rows)), config.out_path, config.force)
            if config.out_path:
                sys.stdout.write(to_json_text({"fit": summary["fit"], "slope": summary["slope"]}))
        else:
            emit(to_json_text(summary), config.out_path, config.force)
        logger.info(
            "DME sweep completed (n=%s, t=%s, m=%s, slope=%s).",
            config.n,
            config.t,
            list(m_values),
            summary["slope"],
        )
        return EXIT_SUCCESS

    return guarded(body)


if __name__ == "__main__":
    sys.exit(run_cli())
