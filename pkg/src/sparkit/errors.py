"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations


class SparkitError(Exception):
    """Base class for every error raised by sparkit."""


class ContractViolation(SparkitError, ValueError):
    """An operation was called with arguments outside its contract
    (dimension mismatch, index out of range, malformed value)."""


class FrameError(SparkitError, ValueError):
    """A collection of vectors failed frame validation."""


class PreconditionError(SparkitError, ValueError):
    """A mathematical precondition of a certificate check does not hold."""


class ResourceGuardError(SparkitError):
    """The instance exceeds the desk-scale size guard."""


class InconsistencyError(SparkitError, RuntimeError):
    """Two routes that must agree did not. Always a bug, never bad input."""
