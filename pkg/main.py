"""
Precomputation cost-model toolkit
=================================
Simulates gate teleportation with precomputed resource states, the layered
protocol for diagonal Clifford-hierarchy gates and density matrix
exponentiation, and reports standard vs precomputation gate counts.

Subcommands:
  teleport    corrected Clifford teleportation trials
  zk-run      layered precomputation protocol for a random diagonal element
  dme-sweep   DME error versus copy count
  cost-table  ledgers per size with fitted exponents
  selftest    built-in consistency checks

Usage:
  python main.py <subcommand> [options]
"""

import sys
from typing import List, Optional

from constants.report_constants import EXIT_USAGE_ERROR, SUBCOMMANDS
from jobs import cost_table, dme_sweep, selftest, teleport, zk_run

# ------------------------------------------------------------------ #
#  Dispatch
# ------------------------------------------------------------------ #
JOBS = {
    "teleport": teleport.run_cli,
    "zk-run": zk_run.run_cli,
    "dme-sweep": dme_sweep.run_cli,
    "cost-table": cost_table.run_cli,
    "selftest": selftest.run_cli,
}


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stderr.write(__doc__)
        return EXIT_USAGE_ERROR if not argv else 0
    subcommand, rest = argv[0], argv[1:]
    if subcommand not in SUBCOMMANDS:
        sys.stderr.write(f"Unknown subcommand '{subcommand}'. Choose one of: {', '.join(SUBCOMMANDS)}.\n")
        return EXIT_USAGE_ERROR
    return JOBS[subcommand](rest)


if __name__ == "__main__":
    sys.exit(main())
