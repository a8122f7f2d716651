"""Exception types shared across the package."""

from __future__ import annotations


class DriveMoodError(Exception):
    """Base class for errors raised by drivemood."""


class ParseError(DriveMoodError):
    """Malformed input file; carries the offending location when known."""

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None and line is not None:
            where = f"{path}:{line}: "
        elif line is not None:
            where = f"line {line}: "
        elif path is not None:
            where = f"{path}: "
        super().__init__(where + message)


class DataError(DriveMoodError):
    """Referential or consistency problem in otherwise well-formed data."""


class InsufficientDataError(DriveMoodError):
    """Not enough samples or windows to compute the requested statistic."""


class ArtifactError(DriveMoodError):
    """Physiologically implausible sample rejected from a window."""


class LockError(DriveMoodError):
    """The data directory is already locked by another mutating command."""
