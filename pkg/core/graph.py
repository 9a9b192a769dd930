# core/graph.py

"""
Workflow data model: subtask nodes, workflow DAGs with START/END terminals,
and node chains.

Internal nodes are identified by their 1-based index, terminals by the
reserved labels ``"START"`` and ``"END"``. All types are immutable.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple, Union

import networkx as nx

from core.errors import (
    CycleError,
    DanglingEdgeError,
    DuplicateIndexError,
    InvalidNodeError,
    TerminalEdgeError,
    UnknownNodeError,
)

START = "START"
END = "END"

NodeId = Union[int, str]
Edge = Tuple[NodeId, NodeId]


class NodeKind(str, Enum):
    INTERNAL = "internal"
    START = "start"
    END = "end"


@dataclass(frozen=True)
class WorkflowNode:
    """One subtask of a workflow (or a START/END terminal)."""

    index: int
    label: str
    kind: NodeKind = NodeKind.INTERNAL

    @property
    def key(self) -> NodeId:
        """Identifier used in edges: the index, or the terminal label."""
        if self.kind is NodeKind.INTERNAL:
            return self.index
        return self.label

    @property
    def is_terminal(self) -> bool:
        return self.kind is not NodeKind.INTERNAL


START_NODE = WorkflowNode(index=0, label=START, kind=NodeKind.START)
END_NODE = WorkflowNode(index=0, label=END, kind=NodeKind.END)


def node_sort_key(key: NodeId) -> Tuple[int, int]:
    """Order START first, internal nodes by index, END last."""
    if key == START:
        return (0, 0)
    if key == END:
        return (2, 0)
    return (1, int(key))


@dataclass(frozen=True)
class WorkflowGraph:
    """A DAG of workflow nodes. Build instances through :func:`build_graph`."""

    nodes: Tuple[WorkflowNode, ...]
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    @cached_property
    def _by_key(self) -> Dict[NodeId, WorkflowNode]:
        return {node.key: node for node in self.nodes}

    @cached_property
    def _successors(self) -> Dict[NodeId, Tuple[NodeId, ...]]:
        succ: Dict[NodeId, List[NodeId]] = {node.key: [] for node in self.nodes}
        for src, dst in self.edges:
            succ[src].append(dst)
        return {key: tuple(sorted(targets, key=node_sort_key)) for key, targets in succ.items()}

    @cached_property
    def _predecessors(self) -> Dict[NodeId, Tuple[NodeId, ...]]:
        pred: Dict[NodeId, List[NodeId]] = {node.key: [] for node in self.nodes}
        for src, dst in self.edges:
            pred[dst].append(src)
        return {key: tuple(sorted(sources, key=node_sort_key)) for key, sources in pred.items()}

    def __contains__(self, key: object) -> bool:
        return key in self._by_key

    def node(self, key: NodeId) -> WorkflowNode:
        try:
            return self._by_key[key]
        except KeyError as exc:
            raise UnknownNodeError(f"Node {key!r} is not part of the graph") from exc

    @property
    def keys(self) -> Tuple[NodeId, ...]:
        return tuple(node.key for node in self.nodes)

    @property
    def internal_nodes(self) -> Tuple[WorkflowNode, ...]:
        return tuple(node for node in self.nodes if not node.is_terminal)

    @property
    def internal_indices(self) -> Tuple[int, ...]:
        return tuple(node.index for node in self.internal_nodes)

    @property
    def internal_edges(self) -> FrozenSet[Edge]:
        return frozenset((src, dst) for src, dst in self.edges if src not in (START, END) and dst not in (START, END))

    @property
    def has_terminals(self) -> bool:
        return START in self._by_key and END in self._by_key

    def successors(self, key: NodeId) -> Tuple[NodeId, ...]:
        self.node(key)
        return self._successors[key]

    def predecessors(self, key: NodeId) -> Tuple[NodeId, ...]:
        self.node(key)
        return self._predecessors[key]

    def has_edge(self, src: NodeId, dst: NodeId) -> bool:
        return (src, dst) in self.edges

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges, key=lambda edge: (node_sort_key(edge[0]), node_sort_key(edge[1])))

    def to_digraph(self) -> nx.DiGraph:
        """Return a fresh networkx view of the graph (node keys as nodes)."""
        digraph = nx.DiGraph()
        digraph.add_nodes_from(self.keys)
        digraph.add_edges_from(self.edges)
        return digraph


@dataclass(frozen=True)
class NodeChain:
    """An ordered list of internal workflow nodes."""

    nodes: Tuple[WorkflowNode, ...]

    def __post_init__(self) -> None:
        seen = set()
        for node in self.nodes:
            if node.is_terminal:
                raise InvalidNodeError("A node chain holds internal nodes only")
            if node.index in seen:
                raise DuplicateIndexError(f"Node index {node.index} appears twice in the chain")
            seen.add(node.index)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(node.index for node in self.nodes)

    @classmethod
    def from_indices(cls, graph: WorkflowGraph, indices: Iterable[int]) -> "NodeChain":
        return cls(tuple(graph.node(index) for index in indices))


def _parse_endpoint(raw: NodeId) -> NodeId:
    if isinstance(raw, str):
        upper = raw.strip().upper()
        if upper in (START, END):
            return upper
        if upper.isdigit():
            return int(upper)
        raise DanglingEdgeError(f"Edge endpoint {raw!r} is neither an index nor START/END")
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise DanglingEdgeError(f"Edge endpoint {raw!r} is neither an index nor START/END")
    return raw


def build_graph(
    nodes: Sequence[Tuple[int, str]],
    edges: Iterable[Tuple[NodeId, NodeId]],
) -> WorkflowGraph:
    """
    Build a validated workflow graph from ``(index, label)`` pairs and edges.

    START and END are inserted when absent; duplicate edges collapse into one.
    Labels lose outer whitespace and must fit on one line.
    """
    internal: Dict[int, WorkflowNode] = {}
    for index, label in nodes:
        if isinstance(index, bool) or not isinstance(index, int) or index < 1:
            raise InvalidNodeError(f"Node index {index!r} must be a positive integer")
        if index in internal:
            raise DuplicateIndexError(f"Node index {index} is declared twice")
        if not isinstance(label, str) or not label.strip():
            raise InvalidNodeError(f"Node {index} has an empty label")
        # one text line per node
        label = label.strip()
        if len(label.splitlines()) > 1:
            raise InvalidNodeError(f"Node {index} label {label!r} spans several lines")
        internal[index] = WorkflowNode(index=index, label=label)

    edge_set = set()
    for raw_src, raw_dst in edges:
        src, dst = _parse_endpoint(raw_src), _parse_endpoint(raw_dst)
        for endpoint in (src, dst):
            if isinstance(endpoint, int) and endpoint not in internal:
                raise DanglingEdgeError(f"Edge ({src}, {dst}) references undeclared node {endpoint}")
        if dst == START or src == END:
            raise TerminalEdgeError(f"Edge ({src}, {dst}) enters START or leaves END")
        if src == dst:
            raise CycleError([src, dst])
        edge_set.add((src, dst))

    ordered = (START_NODE, *(internal[index] for index in sorted(internal)), END_NODE)
    graph = WorkflowGraph(nodes=ordered, edges=frozenset(edge_set))

    try:
        cycle = nx.find_cycle(graph.to_digraph())
    except nx.NetworkXNoCycle:
        return graph
    raise CycleError([src for src, _ in cycle] + [cycle[0][0]])


def induced_subgraph(graph: WorkflowGraph, keys: Iterable[NodeId]) -> WorkflowGraph:
    """Return the subgraph on ``keys`` with every edge of ``graph`` between them."""
    subset = set(keys)
    unknown = [key for key in subset if key not in graph]
    if unknown:
        raise UnknownNodeError(f"Nodes {sorted(unknown, key=node_sort_key)} are not part of the graph")
    nodes = tuple(node for node in graph.nodes if node.key in subset)
    edges = frozenset(edge for edge in graph.edges if edge[0] in subset and edge[1] in subset)
    return WorkflowGraph(nodes=nodes, edges=edges)


def strip_terminals(graph: WorkflowGraph) -> WorkflowGraph:
    """Drop START/END and their incident edges."""
    return induced_subgraph(graph, graph.internal_indices)


def transitive_reduction(graph: WorkflowGraph) -> WorkflowGraph:
    """Remove every edge implied by a longer path (optional scoring preprocessing)."""
    reduced = nx.transitive_reduction(graph.to_digraph())
    return WorkflowGraph(nodes=graph.nodes, edges=frozenset(reduced.edges()))


def promote_terminals(graph: WorkflowGraph, chain: NodeChain) -> Tuple[WorkflowGraph, NodeChain]:
    """
    Turn START/END into ordinary nodes labelled "START"/"END" so they take part
    in matching and scoring. Internal indices shift by one; START becomes 1 and
    END follows the largest index.
    """
    if not graph.has_terminals:
        return graph, chain

    offset = 1
    end_index = max(graph.internal_indices, default=0) + offset + 1
    mapping: Dict[NodeId, int] = {START: 1, END: end_index}
    mapping.update({index: index + offset for index in graph.internal_indices})

    nodes = [(1, START)]
    nodes += [(mapping[node.index], node.label) for node in graph.internal_nodes]
    nodes.append((end_index, END))
    promoted = WorkflowGraph(
        nodes=tuple(WorkflowNode(index=index, label=label) for index, label in nodes),
        edges=frozenset((mapping[src], mapping[dst]) for src, dst in graph.edges),
    )
    promoted_chain = NodeChain.from_indices(
        promoted, [1, *(mapping[index] for index in chain.indices), end_index]
    )
    return promoted, promoted_chain


def graph_from_adjacency(
    labels: Mapping[int, str], adjacency: Mapping[int, Iterable[int]], *, terminals: bool = True
) -> WorkflowGraph:
    """
    Build a graph from an internal adjacency mapping. With ``terminals`` the
    sources are wired to START and the sinks to END.
    """
    edges: List[Edge] = [(src, dst) for src, targets in adjacency.items() for dst in targets]
    if terminals:
        has_pred = {dst for _, dst in edges}
        has_succ = {src for src, _ in edges}
        edges += [(START, index) for index in sorted(labels) if index not in has_pred]
        edges += [(index, END) for index in sorted(labels) if index not in has_succ]
    return build_graph(sorted(labels.items()), edges)


def edge_count(graph: WorkflowGraph, *, include_terminals: bool = True) -> int:
    return len(graph.edges) if include_terminals else len(graph.internal_edges)
