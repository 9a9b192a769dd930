# core/errors.py

from typing import Optional


class WorfEvalError(Exception):
    """Base class for every error raised by the evaluation engine."""


# --- Workflow graph construction ---


class WorkflowGraphError(WorfEvalError, ValueError):
    """A workflow graph violates one of its structural invariants."""


class CycleError(WorkflowGraphError):
    """The edges contain a directed cycle (self-loops included)."""

    def __init__(self, cycle: list) -> None:
        self.cycle = cycle
        path = " -> ".join(str(node) for node in cycle)
        super().__init__(f"Workflow graph contains a cycle: {path}")


class DanglingEdgeError(WorkflowGraphError):
    """An edge references a node index that was never declared."""


class DuplicateIndexError(WorkflowGraphError):
    """Two nodes share the same index."""


class InvalidNodeError(WorkflowGraphError):
    """A node has an index below 1 or an empty label."""


class TerminalEdgeError(WorkflowGraphError):
    """An edge enters START or leaves END."""


class UnknownNodeError(WorkflowGraphError):
    """A node subset names nodes that are not part of the graph."""


class IndexMismatchError(WorfEvalError, ValueError):
    """A node chain does not cover exactly the internal nodes of its graph."""


# --- Parsing and ingestion ---


class FormatError(WorfEvalError):
    """Workflow text does not follow the Node:/Edge: format."""

    def __init__(self, category: str, message: str, line: Optional[int] = None) -> None:
        self.category = category
        self.message = message
        self.line = line
        location = f" (line {line})" if line is not None else ""
        super().__init__(f"[{category}]{location} {message}")


class SchemaError(WorfEvalError):
    """A record of a line-delimited input file is malformed."""

    def __init__(self, line: int, field: str, message: str) -> None:
        self.line = line
        self.field = field
        self.message = message
        super().__init__(f"line {line}, field '{field}': {message}")


class JoinError(WorfEvalError):
    """A prediction has no gold sample with the same id."""


# --- Similarity providers ---


class ProviderError(WorfEvalError):
    """A similarity provider cannot score a pair of labels."""


class ServiceError(ProviderError):
    """The embedding service failed or returned an unusable response."""


# --- Scheduling ---


class ScheduleError(WorfEvalError, ValueError):
    """Durations cannot be used for critical-path analysis."""


class MissingDurationError(ScheduleError):
    """An internal node has no duration."""


class ZeroDurationError(ScheduleError):
    """All durations are zero, so no speedup is defined."""


class InvalidDurationError(ScheduleError):
    """A duration is negative or not finite."""


# --- Oracles ---


class TooLargeError(WorfEvalError, ValueError):
    """An instance exceeds the size a brute-force oracle accepts."""
