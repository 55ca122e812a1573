"""
Report formats, exit codes and environment variable names used by the CLI.
"""

EXIT_SUCCESS = 0
EXIT_VERIFICATION_FAILURE = 1
EXIT_USAGE_ERROR = 2

ENVELOPE_ENV_VAR = "TP_ENVELOPE"
WORKER_COUNT_ENV_VAR = "TP_WORKER_COUNT"
DEFAULT_ENVELOPE_PATH = "data/envelope.json"
DEFAULT_WORKER_COUNT = 2

FORMAT_JSON = "json"
FORMAT_CSV = "csv"
OUTPUT_FORMATS = (FORMAT_JSON, FORMAT_CSV)

SUBCOMMANDS = ("teleport", "zk-run", "dme-sweep", "cost-table", "selftest")

PHASE_PREP = "prep"
PHASE_CONSUME = "consume"
PHASE_STANDARD = "standard"
LEDGER_PHASES = (PHASE_PREP, PHASE_CONSUME)

DME_SWEEP_CSV_HEADER = ("m", "t", "mean_error", "std_error", "n_probes", "seed")
COST_TABLE_CSV_HEADER = (
    "n",
    "k",
    "a",
    "phase",
    "clifford1q",
    "clifford2q",
    "t",
    "meas",
    "idticks",
    "depth",
    "peak_width",
    "classical_ops",
)

JSON_FLOAT_DIGITS = 12

DEFAULT_DME_M_VALUES = (50, 100, 200, 400, 800, 1600)
DEFAULT_BUDGET_CONSTANT = 1.0
BUDGET_CONSTANT_CANDIDATES = (0.25, 0.5, 1.0, 2.0, 4.0)

TRIAL_CSV_HEADER = (
    "trial",
    "phase",
    "clifford1q",
    "clifford2q",
    "t",
    "meas",
    "idticks",
    "depth",
    "peak_width",
    "trace_distance",
)
