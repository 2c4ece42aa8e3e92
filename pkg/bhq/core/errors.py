"""
Error types for bhq.

Each error carries the process exit code the CLI maps it to.
"""

from typing import Optional


class BhqError(Exception):
    """Base class for every error raised by bhq."""
    exit_code = 2


class InputError(BhqError, ValueError):
    """Malformed or out-of-domain input."""
    exit_code = 2


class TreeSyntaxError(InputError):
    """Query-tree text that does not follow the grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class ResourceError(BhqError):
    """A configured enumeration cap would be exceeded."""
    exit_code = 3

    def __init__(self, cap: str, limit: int, requested: int):
        super().__init__(f"{cap} cap exceeded: requested {requested}, limit {limit}")
        self.cap = cap
        self.limit = limit
        self.requested = requested


class VerificationFailure(BhqError):
    """A constructive check found a counterexample."""
    exit_code = 1

    def __init__(self, message: str, report: Optional[object] = None):
        super().__init__(message)
        self.report = report
