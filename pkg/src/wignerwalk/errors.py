"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations


class WalkError(Exception):
    """Base class for all library errors."""


class DomainError(WalkError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class DegenerateAngleError(DomainError):
    """The spectral angle theta is undefined at wave number ``k``."""

    def __init__(self, k: float, message: str | None = None):
        self.k = k
        super().__init__(message or f"spectral angle theta is undefined at k={k!r}")


class DegenerateCoinError(DomainError):
    """The coin parameters sit on a degenerate boundary of the limit theory."""


class ConsistencyError(WalkError, RuntimeError):
    """An internal identity that must hold numerically was violated."""


class ConfigError(WalkError, ValueError):
    """A command-line configuration could not be parsed or validated."""

    def __init__(self, message: str, column: int | None = None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)
