"""
Exception types shared by the simulators, protocols and the CLI.

The CLI maps them to exit codes:
  - UsageError / EnvelopeConfigError -> 2
  - VerificationError                 -> 1
"""


class UsageError(ValueError):
    """Raised when a caller passes invalid labels, widths, ranges or flags."""


class ResourceConsumedError(UsageError):
    """Raised when a single-use resource state is consumed a second time."""


class SimulatorInternalError(RuntimeError):
    """Raised when an internal simulator invariant is broken."""


class EnvelopeConfigError(RuntimeError):
    """Raised when the verification envelope file is missing/invalid."""


class VerificationError(RuntimeError):
    """Raised when a verification oracle rejects a run."""
