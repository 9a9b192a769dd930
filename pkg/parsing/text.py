# parsing/text.py

"""
Reader and writer for the workflow text format::

    Node:
    1: Find the potato
    2: Put potato in garbagecan 1
    Edge:
    (START, 1) (1, 2) (2, END)

The textual order of the node lines is the predicted node chain.
"""

import re
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from core.errors import (
    CycleError,
    DanglingEdgeError,
    DuplicateIndexError,
    FormatError,
    InvalidNodeError,
    TerminalEdgeError,
    WorkflowGraphError,
)
from core.graph import END, START, Edge, NodeChain, NodeId, WorkflowGraph, build_graph

MISSING_NODE_SECTION = "missing-node-section"
MISSING_EDGE_SECTION = "missing-edge-section"
BAD_EDGE_TOKEN = "bad-edge-token"
UNDEFINED_NODE_REFERENCE = "undefined-node-reference"
DUPLICATE_INDEX = "duplicate-index"
BAD_NODE_LINE = "bad-node-line"
CYCLIC_GRAPH = "cyclic-graph"
INVALID_TERMINAL_EDGE = "invalid-terminal-edge"

_STRICT_NODE_HEADER = re.compile(r"^Node:$")
_STRICT_EDGE_HEADER = re.compile(r"^Edge:$")
_LENIENT_NODE_HEADER = re.compile(r"^[\s#*]*nodes?\s*:[\s*]*$", re.IGNORECASE)
_LENIENT_EDGE_HEADER = re.compile(r"^[\s#*]*edges?\s*:[\s*]*(?P<rest>\(.*)?$", re.IGNORECASE)

_STRICT_NODE_LINE = re.compile(r"^(?P<index>[0-9]{1,9})\s*[:.]\s*(?P<label>.*)$")
_NUMBERED_NODE_LINE = re.compile(r"^(?P<index>[0-9]{1,9})\s*[:.)]\s*(?P<label>.*)$")
_LETTERED_NODE_LINE = re.compile(r"^[A-Za-z]\s*[.)]\s+(?P<label>.+)$")
_BULLET = re.compile(r"^(?:[-*+•]\s+)+")

_EDGE_PAIR = re.compile(r"\(([^()]*)\)")
_ENDPOINT_INDEX = re.compile(r"^[0-9]{1,9}$")
_EDGE_SEPARATORS = re.compile(r"[\s,;]+")


@dataclass(frozen=True)
class ParsedWorkflow:
    """A successfully parsed workflow: its nodes in text order and the validated graph."""

    nodes: Tuple[Tuple[int, str], ...]
    edges: Tuple[Edge, ...]
    graph: WorkflowGraph
    chain: NodeChain


def _decode(text: Union[str, bytes]) -> str:
    if isinstance(text, bytes):
        return text.decode("utf-8", errors="replace")
    return text


def _find_header(lines: Sequence[str], pattern: re.Pattern, start: int) -> Optional[int]:
    for number in range(start, len(lines)):
        if pattern.match(lines[number].rstrip()):
            return number
    return None


def _parse_node_line(raw: str, position: int, line_no: int, strict: bool) -> Tuple[int, str]:
    if strict:
        match = _STRICT_NODE_LINE.match(raw.strip())
        if match is None:
            raise FormatError(BAD_NODE_LINE, f"Expected 'N: label', got {raw.strip()!r}", line_no)
        index, label = int(match.group("index")), match.group("label").strip()
    else:
        line = _BULLET.sub("", raw.strip())
        numbered = _NUMBERED_NODE_LINE.match(line)
        lettered = _LETTERED_NODE_LINE.match(line)
        if numbered is not None:
            index, label = int(numbered.group("index")), numbered.group("label").strip()
        elif lettered is not None:
            index, label = position, lettered.group("label").strip()
        else:
            index, label = position, line

    if index < 1:
        raise FormatError(BAD_NODE_LINE, f"Node index must start at 1, got {index}", line_no)
    if not label:
        raise FormatError(BAD_NODE_LINE, f"Node {index} has an empty label", line_no)
    return index, label


def _parse_endpoint(token: str, line_no: Optional[int]) -> NodeId:
    token = token.strip()
    if _ENDPOINT_INDEX.match(token):
        return int(token)
    if token.upper() in (START, END):
        return token.upper()
    raise FormatError(BAD_EDGE_TOKEN, f"Unknown edge endpoint {token!r}", line_no)


def _coerce_endpoint(value: NodeId) -> NodeId:
    if isinstance(value, str):
        return _parse_endpoint(value, None)
    return value


def _parse_edge_line(text: str, line_no: int, strict: bool) -> List[Edge]:
    edges: List[Edge] = []
    for match in _EDGE_PAIR.finditer(text):
        parts = match.group(1).split(",")
        if len(parts) != 2:
            raise FormatError(BAD_EDGE_TOKEN, f"Edge ({match.group(1)}) must have two endpoints", line_no)
        edges.append((_parse_endpoint(parts[0], line_no), _parse_endpoint(parts[1], line_no)))

    residue = _EDGE_SEPARATORS.sub("", _EDGE_PAIR.sub("", text))
    if residue and strict:
        raise FormatError(BAD_EDGE_TOKEN, f"Unexpected text {residue[:40]!r} in edge section", line_no)
    if "(" in residue or ")" in residue:
        raise FormatError(BAD_EDGE_TOKEN, "Unbalanced parenthesis in edge section", line_no)
    return edges


def build_parsed_workflow(nodes: Sequence[Tuple[int, str]], edges: Iterable[Edge]) -> ParsedWorkflow:
    """Validate parsed nodes/edges into a graph; graph errors become FormatErrors."""
    edge_list = tuple(edges)

    try:
        graph = build_graph(nodes, edge_list)
    except DanglingEdgeError as exc:
        raise FormatError(UNDEFINED_NODE_REFERENCE, str(exc)) from exc
    except DuplicateIndexError as exc:
        raise FormatError(DUPLICATE_INDEX, str(exc)) from exc
    except InvalidNodeError as exc:
        raise FormatError(BAD_NODE_LINE, str(exc)) from exc
    except TerminalEdgeError as exc:
        raise FormatError(INVALID_TERMINAL_EDGE, str(exc)) from exc
    except CycleError as exc:
        raise FormatError(CYCLIC_GRAPH, str(exc)) from exc
    except WorkflowGraphError as exc:
        raise FormatError(BAD_EDGE_TOKEN, str(exc)) from exc

    chain = NodeChain.from_indices(graph, [index for index, _ in nodes])
    labelled = tuple((index, graph.node(index).label) for index, _ in nodes)
    return ParsedWorkflow(nodes=labelled, edges=edge_list, graph=graph, chain=chain)


def parse_workflow_text(text: Union[str, bytes], *, strict: bool = False) -> ParsedWorkflow:
    """
    Parse a "Node:/Edge:" workflow.

    Lenient mode (default) accepts "N." and "N)" numbering, bullets, letter
    enumerators and unnumbered lines (indexed by position), markdown around the
    headers, case-insensitive START/END and an empty edge section. Strict mode
    accepts only the normative grammar.

    Raises:
        FormatError: the text is not a valid workflow; ``category`` says why.
    """
    lines = _decode(text).splitlines()
    node_header = _STRICT_NODE_HEADER if strict else _LENIENT_NODE_HEADER
    edge_header = _STRICT_EDGE_HEADER if strict else _LENIENT_EDGE_HEADER

    node_start = _find_header(lines, node_header, 0)
    if node_start is None:
        raise FormatError(MISSING_NODE_SECTION, "No 'Node:' section found")
    edge_start = _find_header(lines, edge_header, node_start + 1)
    if edge_start is None:
        raise FormatError(MISSING_EDGE_SECTION, "No 'Edge:' section found after the node section")

    nodes: List[Tuple[int, str]] = []
    for number in range(node_start + 1, edge_start):
        if not lines[number].strip():
            continue
        nodes.append(_parse_node_line(lines[number], len(nodes) + 1, number + 1, strict))
    if not nodes:
        raise FormatError(MISSING_NODE_SECTION, "The 'Node:' section is empty", node_start + 1)

    edges: List[Edge] = []
    header_match = edge_header.match(lines[edge_start].rstrip())
    header_rest = header_match.groupdict().get("rest") if header_match else None
    if header_rest:
        edges.extend(_parse_edge_line(header_rest, edge_start + 1, strict))
    for number in range(edge_start + 1, len(lines)):
        edges.extend(_parse_edge_line(lines[number], number + 1, strict))
    if strict and not edges:
        raise FormatError(MISSING_EDGE_SECTION, "The 'Edge:' section is empty", edge_start + 1)

    return build_parsed_workflow(nodes, edges)


def parse_structured(labels: Sequence[str], edges: Iterable[Sequence[NodeId]]) -> ParsedWorkflow:
    """Build a ParsedWorkflow from record-style input: labels indexed by position."""
    nodes = [(position, label) for position, label in enumerate(labels, start=1)]
    parsed_edges: List[Edge] = []
    for pair in edges:
        if len(pair) != 2:
            raise FormatError(BAD_EDGE_TOKEN, f"Edge {list(pair)!r} must have two endpoints")
        src, dst = pair
        parsed_edges.append((_coerce_endpoint(src), _coerce_endpoint(dst)))
    return build_parsed_workflow(nodes, parsed_edges)


def serialize_workflow(graph: WorkflowGraph, chain: Optional[NodeChain] = None) -> str:
    """
    Canonical text for a workflow: node lines in chain order (index order when
    no chain is given), then every edge in sorted order on one line.
    """
    order = chain.indices if chain is not None else graph.internal_indices
    lines = ["Node:"]
    lines += [f"{index}: {graph.node(index).label}" for index in order]
    lines.append("Edge:")
    if graph.edges:
        lines.append(" ".join(f"({src}, {dst})" for src, dst in graph.sorted_edges()))
    return "\n".join(lines)
