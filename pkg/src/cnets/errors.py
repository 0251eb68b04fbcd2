"""Exception hierarchy and the process exit codes the CLI maps them to."""

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_IO = 3


class CnError(Exception):
    """Base class for all errors raised by this package.

    Errors raised while a run is in flight carry a ``step_position``
    attribute, a ``(slow_step, fast_step)`` pair locating the failure
    (``fast_step`` is None when the slow phase itself failed).
    """

    exit_code = EXIT_CONFIG
    step_position: "tuple[int, int | None] | None" = None


class ConfigurationError(CnError):
    """Invalid configuration, arguments, or problem/network mismatch."""

    exit_code = EXIT_CONFIG


class MalformedInstanceError(ConfigurationError):
    """Problem data violates its own contract (e.g. a non-positive tour length)."""


class DeadEndError(ConfigurationError):
    """A constructive walk ran out of admissible moves too many times."""


class NumericDivergenceError(CnError):
    """A state or readout value became non-finite."""

    exit_code = EXIT_NUMERIC


class RecordIoError(CnError):
    """A record file could not be read, parsed, or written."""

    exit_code = EXIT_IO
