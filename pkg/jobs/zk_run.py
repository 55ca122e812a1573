"""
End-to-end precomputation protocol for a random diagonal element u.

Example:
  python -m jobs.zk_run --n 3 --k 3 --a 2 --seed 1
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

import numpy as np
from dotenv import load_dotenv

from constants.report_constants import (
    EXIT_SUCCESS,
    FORMAT_CSV,
    PHASE_CONSUME,
    PHASE_PREP,
    PHASE_STANDARD,
    TRIAL_CSV_HEADER,
)
from constants.sim_constants import PROTOCOL_TOLERANCE
from jobs.cli_support import add_output_arguments, configure_logging, guarded, trial_ledger_rows
from models.ledger import TaskInstance
from models.run_config import RunConfig
from models.zk_element import ZkElement
from services.cost_model_service import standard_cost_zk
from services.envelope import get_worker_count_from_env, load_envelope
from services.errors import UsageError, VerificationError
from services.report_writer import check_output_path, emit, to_csv_text, to_json_text
from services.simulator_service import random_product_state, symbolic_state
from services.trial_runner import run_trials
from services.zk_protocol_service import run_protocol
from services.zk_service import random_zk

logger = logging.getLogger(__name__)

LEDGER_COLUMNS = (PHASE_STANDARD, PHASE_CONSUME, PHASE_PREP)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zk-run",
        description="Run the layered precomputation protocol and check it against direct application.",
    )
    parser.add_argument("--n", type=int, default=2, help="Number of qubits (default: 2).")
    parser.add_argument("--k", type=int, default=2, help="Level bound of u (default: 2).")
    parser.add_argument("--a", type=int, default=None, help="Stop level (default: max(1, k // 2)).")
    parser.add_argument("--trials", type=int, default=1, help="Independent inputs/runs (default: 1).")
    parser.add_argument(
        "--parallel",
        action="store_true",
        help="Apply the final correction through fanout copies.",
    )
    parser.add_argument(
        "--require-verify",
        action="store_true",
        help="Fail instead of running ledger-only when (n, k, a) is outside the envelope.",
    )
    add_output_arguments(parser)
    return parser


def protocol_trial(u: ZkElement, a: int, verify: bool, parallel: bool):
    def trial(index: int, rng: np.random.Generator) -> dict:
        input_state = random_product_state(u.n, rng) if verify else symbolic_state(u.n)
        resource, result = run_protocol(u, input_state, rng, a, parallel)
        return {
            "trial": index,
            "choices": list(result.transcript.choices),
            "outcomes": [outcome.to_dict() for outcome in result.transcript.outcomes],
            "residual": result.residual.to_text(),
            "residual_level": result.residual.level,
            "final_pauli": result.final_pauli.to_text(),
            "gadgets": resource.gadget_count,
            "resource_width": resource.staged_width,
            "peak_live_width": result.peak_live_width,
            "event_counts": dict(result.event_counts),
            "classical_op_count": result.classical_op_count,
            "ledgers": {
                PHASE_STANDARD: standard_cost_zk(u).to_dict(),
                PHASE_CONSUME: result.consume_ledger.to_dict(),
                PHASE_PREP: result.prep_ledger.to_dict(),
            },
            "trace_distance": result.trace_distance_to_direct,
        }

    return trial


def run_cli(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    configure_logging()
    args = _build_parser().parse_args(argv)

    def body() -> int:
        config = RunConfig(
            subcommand="zk-run",
            n=args.n,
            k=args.k,
            a=args.a,
            trials=args.trials,
            seed=args.seed,
            out_path=args.out,
            format=args.format,
            force=args.force,
            require_verify=args.require_verify,
        )
        check_output_path(config.out_path, config.force)
        a = config.stop_level
        envelope = load_envelope()
        verify = envelope.allows_zk(config.n, config.k, a)
        if not verify:
            if config.require_verify:
                raise UsageError(f"(n={config.n}, k={config.k}, a={a}) is outside the verification envelope.")
            logger.warning(
                "(n=%s, k=%s, a=%s) is outside the verification envelope; running ledger-only.",
                config.n,
                config.k,
                a,
            )

        u = random_zk(config.n, config.k, np.random.default_rng(config.seed))
        trials = run_trials(
            protocol_trial(u, a, verify, args.parallel),
            config.trials,
            config.seed,
            get_worker_count_from_env(),
        )
        distances = [t["trace_distance"] for t in trials if t["trace_distance"] is not None]
        max_distance = max(distances) if distances else None
        max_residual_level = max(t["residual_level"] for t in trials)
        report = {
            "config": config.to_dict(),
            "u": u.to_dict(),
            "parallel": args.parallel,
            "verified": verify,
            "max_trace_distance": max_distance,
            "residual_level": max_residual_level,
            "trials": trials,
            "task": TaskInstance(
                early_input={"x": f"diagonal element u = {u.to_text()}"},
                late_input={"rho": "input product state", "y": "gadget choice bits"},
                outputs={"z": "transcript, residual and final Pauli", "sigma": "u|ψ⟩"},
            ).to_dict(),
        }
        if config.format == FORMAT_CSV:
            emit(to_csv_text(TRIAL_CSV_HEADER, trial_ledger_rows(trials, LEDGER_COLUMNS)), config.out_path, config.force)
        else:
            emit(to_json_text(report), config.out_path, config.force)
        logger.info(
            "zk-run completed (n=%s, k=%s, a=%s, verified=%s, residual_level=%s, max_trace_distance=%s).",
            config.n,
            config.k,
            a,
            verify,
            max_residual_level,
            max_distance,
        )
        if max_distance is not None and max_distance > PROTOCOL_TOLERANCE:
            raise VerificationError(f"max trace distance {max_distance:.3e} exceeds {PROTOCOL_TOLERANCE}.")
        return EXIT_SUCCESS

    return guarded(body)


if __name__ == "__main__":
    sys.exit(run_cli())
