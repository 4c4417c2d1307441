"""Error types raised across the package.

Every error carries a distinct CLI exit code and an optional JSON-pointer
locating the offending element in the parsed document.
"""

from __future__ import annotations


class GczError(Exception):
    """Base class for all errors this package raises deliberately."""

    exit_code = 1

    def __init__(self, message: str, *, pointer: str | None = None):
        super().__init__(message)
        self.pointer = pointer

    def diagnostic(self) -> str:
        """One-line machine-greppable form: ``Name[ at /ptr]: message``."""
        loc = f" at {self.pointer}" if self.pointer else ""
        return f"{type(self).__name__}{loc}: {self}"


# --- control-word grammar ---

class MalformedJson(GczError):
    exit_code = 10


class AmbiguousKind(GczError):
    exit_code = 11


class InvariantViolation(GczError):
    exit_code = 12

    def __init__(self, field: str, value: object, reason: str, *, pointer: str | None = None):
        super().__init__(f"{field}={value!r} {reason}", pointer=pointer)
        self.field = field
        self.value = value


class MixedKinds(GczError):
    exit_code = 13


class EmptySentence(GczError):
    exit_code = 14


class HoldNotLast(GczError):
    exit_code = 15


class BadMagic(GczError):
    exit_code = 16


class TruncatedRecord(GczError):
    exit_code = 17


# --- device state / clock ---

class KindMismatch(GczError):
    exit_code = 18


class UnboundedDuration(GczError):
    exit_code = 19


class SinkClosed(GczError):
    exit_code = 20


# --- node graph ---

class SchemaError(GczError):
    exit_code = 21


class UnknownNodeType(GczError):
    exit_code = 22


class DanglingWire(GczError):
    exit_code = 23


class CycleDetected(GczError):
    exit_code = 24


class UnknownTrigger(GczError):
    exit_code = 25


class UnknownSource(GczError):
    exit_code = 26


# --- transports ---

class BindFailure(GczError):
    exit_code = 27


class BrokerUnreachable(GczError):
    exit_code = 28


class ChecksumMismatch(GczError):
    exit_code = 29


class BadSync(GczError):
    exit_code = 30


class Truncated(GczError):
    exit_code = 31


# --- benchmark / configuration ---

class ProbeTimeout(GczError):
    exit_code = 32


class RouteUnavailable(GczError):
    exit_code = 33


class ConfigError(GczError):
    exit_code = 34
