"""Exception hierarchy shared by every module."""

from __future__ import annotations


class NicerEarsError(Exception):
    """Base class for all library errors."""


class GraphError(NicerEarsError, ValueError):
    """Input graph violates a precondition (loops, disconnected, not 2EC, ...)."""


class ParseError(GraphError):
    """Malformed instance or solution file."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InfeasibleError(NicerEarsError, ValueError):
    """No solution exists (for example a T-join with an odd T-part in some component)."""


class CapabilityError(NicerEarsError, RuntimeError):
    """Instance is above a configured size bound; nothing approximate is returned."""


class InternalError(NicerEarsError, AssertionError):
    """A runtime-asserted invariant or bound failed."""


def check(condition: bool, message: str) -> None:
    """Raise InternalError unless ``condition`` holds (never stripped by ``-O``)."""
    if not condition:
        raise InternalError(message)
