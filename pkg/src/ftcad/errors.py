"""Exception hierarchy shared by every subsystem.

Everything raised on purpose derives from FtcadError so callers (CLI,
HTTP service) can map domain failures to exit code 1 / HTTP 422 in one
place. Violation *reports* are data, not exceptions; only contract
breaches raise.
"""


class FtcadError(Exception):
    """Base class for all expected failures."""

    #: short machine-readable code, overridden per subclass
    code = "error"

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class InvalidGraphError(FtcadError):
    """A graph failed structural validation; carries the full report."""

    code = "invalid-graph"

    def __init__(self, report):
        lines = "; ".join(str(v) for v in report)
        super().__init__(f"graph is not valid: {lines}")
        self.report = report


class NoAttrsError(FtcadError):
    """Reliability data requested from a node that carries none."""

    code = "no-attrs"


class DocumentSyntaxError(FtcadError):
    """Malformed document text. ``offset`` is the byte position when known."""

    code = "syntax"

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class DocumentSchemaError(FtcadError):
    """Well-formed text that violates the document schema."""

    code = "schema"


class MaskRangeError(FtcadError, ValueError):
    """An options entry is negative or does not fit in 32 bits."""

    code = "mask-range"


class CycleError(FtcadError):
    code = "cycle"


class UnreachableSinkError(FtcadError):
    """An actuator has no satisfiable pipeline."""

    code = "unreachable-sink"


class ExplosionError(FtcadError):
    """Pipeline enumeration exceeded the configured cap."""

    code = "explosion"


class DomainError(FtcadError, ValueError):
    """Numeric argument outside the mathematical domain of an operation."""

    code = "domain"


class TooLargeError(FtcadError):
    """Exact enumeration refused: state space over the component limit."""

    code = "too-large"


class MissingIdError(FtcadError):
    """A processing element in a pipeline has no one-hot ID assigned."""

    code = "missing-id"


class UnknownBitError(FtcadError):
    """A mask bit has no entry in the PE directory."""

    code = "unknown-bit"


class IdCollisionError(FtcadError):
    """Two frames contend with the same identifier (config error)."""

    code = "id-collision"


class OutOfRangeError(FtcadError):
    """Identifier outside the 11-bit address space."""

    code = "out-of-range"


class UnknownMnemonicError(FtcadError):
    code = "unknown-mnemonic"


class UnknownPeError(FtcadError):
    """A hello payload carries a bit outside the PE directory."""

    code = "unknown-pe"


class ConfigError(FtcadError):
    """Simulation inputs disagree (options/graph/scenario mismatch)."""

    code = "config"
