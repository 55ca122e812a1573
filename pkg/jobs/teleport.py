"""
Teleport random Clifford circuits through precomputed |Γ(U)⟩ resources and
compare the corrected output with direct application.

Example:
  python -m jobs.teleport --n 2 --trials 20 --seed 7
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

from constants.report_constants import (
    EXIT_SUCCESS,
    FORMAT_CSV,
    PHASE_CONSUME,
    PHASE_PREP,
    PHASE_STANDARD,
    TRIAL_CSV_HEADER,
)
from constants.sim_constants import TELEPORT_TOLERANCE
from jobs.cli_support import add_output_arguments, configure_logging, guarded, trial_ledger_rows
from models.ledger import TaskInstance
from models.run_config import RunConfig
from services.cost_model_service import clifford_standard_cost
from services.envelope import get_worker_count_from_env, load_envelope
from services.errors import UsageError, VerificationError
from services.pauli_service import random_clifford_circuit
from services.report_writer import check_output_path, emit, to_csv_text, to_json_text
from services.simulator_service import random_product_state, symbolic_state
from services.teleport_service import teleport_clifford
from services.trial_runner import run_trials

logger = logging.getLogger(__name__)

LEDGER_COLUMNS = (PHASE_STANDARD, PHASE_CONSUME, PHASE_PREP)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teleport",
        description="Corrected Clifford gate teleportation trials.",
    )
    parser.add_argument("--n", type=int, default=2, help="Number of qubits (default: 2).")
    parser.add_argument("--trials", type=int, default=20, help="Number of random circuits (default: 20).")
    parser.add_argument(
        "--length",
        type=int,
        default=None,
        help="Gates per random circuit (default: 5n²; 0 teleports the identity).",
    )
    parser.add_argument(
        "--require-verify",
        action="store_true",
        help="Fail instead of running ledger-only when n is outside the envelope.",
    )
    add_output_arguments(parser)
    return parser


def teleport_trial(n: int, length: Optional[int], verify: bool):
    def trial(index: int, rng) -> dict:
        circuit = random_clifford_circuit(n, length, rng)
        input_state = random_product_state(n, rng) if verify else symbolic_state(n)
        run = teleport_clifford(circuit, n, input_state, rng)
        return {
            "trial": index,
            "circuit_length": len(circuit),
            "byproduct": run.transcript.byproducts[0].to_text(),
            "ledgers": {
                PHASE_STANDARD: clifford_standard_cost(circuit, n).to_dict(),
                PHASE_CONSUME: run.consume_ledger.to_dict(),
                PHASE_PREP: run.prep_ledger.to_dict(),
            },
            "trace_distance": run.trace_distance_to_direct,
        }

    return trial


def run_cli(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    configure_logging()
    args = _build_parser().parse_args(argv)

    def body() -> int:
        config = RunConfig(
            subcommand="teleport",
            n=args.n,
            trials=args.trials,
            seed=args.seed,
            out_path=args.out,
            format=args.format,
            force=args.force,
            require_verify=args.require_verify,
        )
        if args.length is not None and args.length < 0:
            raise UsageError(f"--length must be >= 0, got {args.length}.")
        check_output_path(config.out_path, config.force)
        envelope = load_envelope()
        verify = envelope.allows_teleport(config.n)
        if not verify:
            if config.require_verify:
                raise UsageError(f"n={config.n} is outside the teleport verification envelope.")
            logger.warning("n=%s is outside the verification envelope; running ledger-only.", config.n)

        trials = run_trials(
            teleport_trial(config.n, args.length, verify),
            config.trials,
            config.seed,
            get_worker_count_from_env(),
        )
        distances = [t["trace_distance"] for t in trials if t["trace_distance"] is not None]
        max_distance = max(distances) if distances else None
        report = {
            "config": config.to_dict(),
            "verified": verify,
            "max_trace_distance": max_distance,
            "trials": trials,
            "task": TaskInstance(
                early_input={"x": "Clifford circuit U"},
                late_input={"rho": "input product state"},
                outputs={"z": "Bell outcomes", "sigma": "U|ψ⟩"},
            ).to_dict(),
        }
        if config.format == FORMAT_CSV:
            emit(to_csv_text(TRIAL_CSV_HEADER, trial_ledger_rows(trials, LEDGER_COLUMNS)), config.out_path, config.force)
        else:
            emit(to_json_text(report), config.out_path, config.force)
        logger.info(
            "Teleport completed (n=%s, trials=%s, verified=%s, max_trace_distance=%s).",
            config.n,
            config.trials,
            verify,
            max_distance,
        )
        if max_distance is not None and max_distance > TELEPORT_TOLERANCE:
            raise VerificationError(f"max trace distance {max_distance:.3e} exceeds {TELEPORT_TOLERANCE}.")
        return EXIT_SUCCESS

    return guarded(body)


if __name__ == "__main__":
    sys.exit(run_cli())
