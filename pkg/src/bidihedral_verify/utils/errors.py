"""Exception hierarchy shared by every verification module."""

from __future__ import annotations

from typing import Optional


class VerificationError(RuntimeError):
    """Base class for all errors raised by the verification library."""


class DomainError(VerificationError, ValueError):
    """Raised when an argument lies outside the domain an operation accepts."""


class MalformedCyclesError(DomainError):
    """Raised when a cycle list repeats a point."""


class PreconditionError(VerificationError, ValueError):
    """Raised when a mathematical precondition of a construction fails."""


class NotFoundError(VerificationError):
    """Raised when a search that is expected to succeed finds nothing."""


class CapacityError(VerificationError):
    """Raised when a computation would exceed a configured size limit."""

    def __init__(self, what: str, requested: int, cap: int) -> None:
        super().__init__(f"{what}: {requested} exceeds the configured cap {cap}")
        self.what = what
        self.requested = requested
        self.cap = cap


class ManifestError(VerificationError):
    """Raised when a check manifest cannot be parsed or validated."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ) -> None:
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column
