"""
Shared constants for the simulators and the gate vocabulary.
"""

NORM_TOLERANCE = 1e-12
DENSITY_TOLERANCE = 1e-10
PSD_TOLERANCE = 1e-9
STATE_EQUALITY_TOLERANCE = 1e-9

MAX_DENSE_ZK_QUBITS = 12
MAX_EXACT_EXPONENTIAL_QUBITS = 6

BASIS_X = "X"
BASIS_Z = "Z"
MEASUREMENT_BASES = (BASIS_X, BASIS_Z)

INITIAL_ZERO = "0"
INITIAL_PLUS = "+"

SINGLE_QUBIT_GATES = ("I", "X", "Z", "H", "S", "SDG", "T", "TDG")
TWO_QUBIT_GATES = ("CNOT", "CZ")
SIMULATOR_GATES = SINGLE_QUBIT_GATES + TWO_QUBIT_GATES

# Gates accepted by the tableau builder and the random Clifford generator.
CLIFFORD_GATES = ("H", "S", "CNOT", "CZ", "X", "Z")
RANDOM_CLIFFORD_GATES = ("H", "S", "CNOT", "CZ")
DIAGONAL_GATES = ("Z", "S", "SDG", "T", "TDG", "CZ", "MCZ")

# Every event name a gate tape accepts.
TAPE_GATES = SIMULATOR_GATES + ("MCZ", "MEASURE", "ALLOC")

RANDOM_CLIFFORD_LENGTH_FACTOR = 5

# Oracle tolerances for the CLI verdicts.
TELEPORT_TOLERANCE = 1e-10
PROTOCOL_TOLERANCE = 1e-9
