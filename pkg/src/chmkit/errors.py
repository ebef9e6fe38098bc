"""Exception types shared across the package."""


class ChmError(Exception):
    """Base class for all chmkit errors."""


class NonFinite(ChmError):
    """A matrix contains NaN or Inf entries."""


class RankDeficient(ChmError):
    """A matrix expected to be numerically full rank is not."""


class ZeroEntry(ChmError):
    """An entry modulus underflowed during unimodularization (bad seed)."""


class DimensionMismatch(ChmError):
    """Operands have incompatible sizes."""


class LengthMismatch(ChmError):
    """A phase vector has the wrong length for the requested assembly."""


class NotHadamard(ChmError):
    """A matrix failed the Hadamard verification required by an operation."""


class UnstableCardinality(ChmError):
    """The Haagerup count changes when the clustering tolerance is varied.

    The tolerance sits on a cluster boundary; re-solve the matrix to higher
    precision before profiling it.
    """


class ParameterOutOfDomain(ChmError):
    """Parameters of a named construction leave its validity domain."""


class SolveFailed(ChmError):
    """An embedded nonlinear solve found no acceptable root."""


class ParseError(ChmError):
    """A matrix or report file is malformed."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class NotFound(ChmError):
    """The requested catalog entry does not exist."""


class VerificationFailed(ChmError):
    """A stored matrix failed re-verification on load."""
