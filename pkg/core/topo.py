# core/topo.py

"""Topological orders of the internal part of a workflow graph."""

from bisect import insort
from itertools import islice
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx

from core.errors import CycleError
from core.graph import NodeChain, WorkflowGraph, strip_terminals

DEFAULT_TOPO_CAP = 20


def _internal_digraph(graph: WorkflowGraph) -> nx.DiGraph:
    return strip_terminals(graph).to_digraph()


def deterministic_topo_sort(graph: WorkflowGraph) -> NodeChain:
    """
    Kahn-style sort that always removes the smallest-index in-degree-0 node
    first, i.e. the lexicographically smallest topological order.
    """
    try:
        order = list(nx.lexicographical_topological_sort(_internal_digraph(graph)))
    except nx.NetworkXUnfeasible as exc:
        raise CycleError(list(graph.internal_indices)) from exc
    return NodeChain.from_indices(graph, order)


def iter_topo_orders(graph: WorkflowGraph) -> Iterator[Tuple[int, ...]]:
    """Lazily yield every topological order of the internal nodes in lexicographic order."""
    internal = strip_terminals(graph)
    indices = internal.internal_indices
    successors: Dict[int, Tuple[int, ...]] = {index: internal.successors(index) for index in indices}
    indegree: Dict[int, int] = {index: len(internal.predecessors(index)) for index in indices}

    available = sorted(index for index in indices if indegree[index] == 0)
    if indices and not available:
        raise CycleError(list(indices))

    order: List[int] = []

    def walk(ready: List[int]) -> Iterator[Tuple[int, ...]]:
        if len(order) == len(indices):
            yield tuple(order)
            return
        for node in list(ready):
            order.append(node)
            next_ready = [other for other in ready if other != node]
            for succ in successors[node]:
                indegree[succ] -= 1
                if indegree[succ] == 0:
                    insort(next_ready, succ)
            yield from walk(next_ready)
            for succ in successors[node]:
                indegree[succ] += 1
            order.pop()

    produced = False
    for found in walk(available):
        produced = True
        yield found
    if indices and not produced:
        raise CycleError(list(indices))


def enumerate_topo_orders(graph: WorkflowGraph, cap: Optional[int] = DEFAULT_TOPO_CAP) -> List[NodeChain]:
    """
    Return the first ``min(total, cap)`` topological orders in lexicographic
    order. ``cap=None`` enumerates all of them.
    """
    if cap is not None and cap < 1:
        raise ValueError(f"cap must be a positive integer, got {cap}")
    return [NodeChain.from_indices(graph, order) for order in islice(iter_topo_orders(graph), cap)]


def count_topo_orders(graph: WorkflowGraph, limit: int) -> int:
    """Count topological orders, saturating at ``limit``."""
    if limit < 1:
        raise ValueError(f"limit must be a positive integer, got {limit}")
    return sum(1 for _ in islice(iter_topo_orders(graph), limit))
