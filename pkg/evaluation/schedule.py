# evaluation/schedule.py

"""Critical-path analysis: how long a workflow takes when independent nodes run in parallel."""

import math
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel

from core.errors import InvalidDurationError, JoinError, MissingDurationError, ZeroDurationError
from core.graph import WorkflowGraph, strip_terminals
from core.logging import get_logger
from core.topo import deterministic_topo_sort
from parsing.records import GoldSample

logger = get_logger(__name__)

# Seconds per internal node index
DurationMap = Mapping[int, float]


class CriticalPath(NamedTuple):
    length: float
    path: Tuple[int, ...]


def _checked_durations(graph: WorkflowGraph, durations: DurationMap) -> Dict[int, float]:
    checked: Dict[int, float] = {}
    for index in graph.internal_indices:
        if index not in durations:
            raise MissingDurationError(f"Node {index} has no duration")
        value = float(durations[index])
        if not math.isfinite(value) or value < 0:
            raise InvalidDurationError(f"Node {index} has invalid duration {durations[index]!r}")
        checked[index] = value
    return checked


def critical_path(graph: WorkflowGraph, durations: DurationMap) -> CriticalPath:
    """
    Longest duration-weighted path through the workflow (terminals weigh 0),
    by dynamic programming over a topological order. Among equally long
    paths the lexicographically smallest is returned.
    """
    internal = strip_terminals(graph)
    weights = _checked_durations(internal, durations)
    if not weights:
        return CriticalPath(0.0, ())

    # longest remaining duration starting at each node, and its best continuation
    best_from: Dict[int, float] = {}
    tail: Dict[int, float] = {}
    for index in reversed(deterministic_topo_sort(internal).indices):
        successors = internal.successors(index)
        tail[index] = max((best_from[succ] for succ in successors), default=0.0)
        best_from[index] = weights[index] + tail[index]

    sources = [index for index in internal.internal_indices if not internal.predecessors(index)]
    length = max(best_from[index] for index in sources)

    node = min(index for index in sources if best_from[index] == length)
    path: List[int] = [node]
    while internal.successors(node):
        node = min(succ for succ in internal.successors(node) if best_from[succ] == tail[node])
        path.append(node)
    return CriticalPath(length, tuple(path))


def total_duration(graph: WorkflowGraph, durations: DurationMap) -> float:
    """Execution time when every node runs one after another."""
    return sum(_checked_durations(strip_terminals(graph), durations).values())


def speedup(graph: WorkflowGraph, durations: DurationMap) -> float:
    """Linear execution time divided by the critical-path length (always >= 1)."""
    total = total_duration(graph, durations)
    if total == 0:
        raise ZeroDurationError("All node durations are zero")
    return total / critical_path(graph, durations).length


class ScheduleRow(BaseModel):
    id: str
    linear_time: float
    parallel_time: float
    speedup: float
    path: Tuple[int, ...]


class ScheduleSummary(BaseModel):
    rows: List[ScheduleRow]
    mean_linear_time: float
    mean_parallel_time: float
    mean_speedup: float
    # 1 - mean parallel time / mean linear time
    time_reduction: float


def schedule_report(samples: Sequence[GoldSample], durations: Mapping[str, DurationMap]) -> ScheduleSummary:
    """
    Linear and parallel execution time for every sample with durations.

    Raises:
        JoinError: a duration record names an unknown sample.
    """
    by_id = {sample.id: sample for sample in samples}
    unknown = sorted(set(durations) - set(by_id))
    if unknown:
        raise JoinError(f"Durations given for unknown samples: {', '.join(unknown)}")

    rows: List[ScheduleRow] = []
    for sample in samples:
        sample_durations: Optional[DurationMap] = durations.get(sample.id)
        if sample_durations is None:
            logger.warning("No durations for sample %s; skipped", sample.id)
            continue
        path = critical_path(sample.gold_graph, sample_durations)
        linear = total_duration(sample.gold_graph, sample_durations)
        rows.append(
            ScheduleRow(
                id=sample.id,
                linear_time=linear,
                parallel_time=path.length,
                speedup=speedup(sample.gold_graph, sample_durations),
                path=path.path,
            )
        )

    if not rows:
        return ScheduleSummary(
            rows=[], mean_linear_time=0.0, mean_parallel_time=0.0, mean_speedup=0.0, time_reduction=0.0
        )

    mean_linear = sum(row.linear_time for row in rows) / len(rows)
    mean_parallel = sum(row.parallel_time for row in rows) / len(rows)
    return ScheduleSummary(
        rows=rows,
        mean_linear_time=mean_linear,
        mean_parallel_time=mean_parallel,
        mean_speedup=sum(row.speedup for row in rows) / len(rows),
        time_reduction=1 - mean_parallel / mean_linear if mean_linear else 0.0,
    )
