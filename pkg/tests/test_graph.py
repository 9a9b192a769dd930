# tests/test_graph.py

import random

import pytest

from core.errors import (
    CycleError,
    DanglingEdgeError,
    DuplicateIndexError,
    InvalidNodeError,
    TerminalEdgeError,
    UnknownNodeError,
)
from core.graph import (
    END,
    START,
    NodeChain,
    build_graph,
    edge_count,
    graph_from_adjacency,
    induced_subgraph,
    promote_terminals,
    strip_terminals,
    transitive_reduction,
)
from fixtures.generators import RandomDagSpec, gen_random_dag
from fixtures.instances import diamond_w3, linear_graph, minimal_workflow


def test_build_graph_inserts_terminals():
    graph = minimal_workflow()
    assert graph.keys == (START, 1, END)
    assert graph.has_terminals
    assert graph.internal_indices == (1,)


def test_duplicate_edges_collapse():
    graph = build_graph([(1, "a"), (2, "b")], [(START, 1), (1, 2), (1, 2), (2, END)])
    assert len(graph.edges) == 3


def test_string_endpoints_are_accepted():
    graph = build_graph([(1, "a")], [("start", "1"), ("1", "end")])
    assert graph.edges == frozenset({(START, 1), (1, END)})


def test_successors_and_predecessors_are_sorted():
    graph = diamond_w3()
    assert graph.successors(1) == (2, 3)
    assert graph.predecessors(4) == (2, 3)
    assert graph.successors(START) == (1,)


@pytest.mark.parametrize(
    "nodes, edges, error",
    [
        ([(1, "a")], [(1, 2)], DanglingEdgeError),
        ([(1, "a")], [(1, START)], TerminalEdgeError),
        ([(1, "a")], [(END, 1)], TerminalEdgeError),
        ([(1, "a")], [(1, 1)], CycleError),
        ([(1, "a"), (2, "b")], [(1, 2), (2, 1)], CycleError),
        ([(0, "a")], [], InvalidNodeError),
        ([(1, "  ")], [], InvalidNodeError),
        ([(1, "a"), (1, "b")], [], DuplicateIndexError),
        ([(1, "a")], [(1, "middle")], DanglingEdgeError),
        ([(1, "two\nlines")], [], InvalidNodeError),
        ([(1, "x\nEdge:")], [], InvalidNodeError),
    ],
)
def test_build_graph_rejects_invalid_input(nodes, edges, error):
    with pytest.raises(error):
        build_graph(nodes, edges)


def test_build_graph_strips_outer_whitespace_from_labels():
    graph = build_graph([(1, "  Find the potato\t"), (2, "Put it   away ")], [(1, 2)])
    assert [node.label for node in graph.internal_nodes] == ["Find the potato", "Put it   away"]


def test_cycle_error_reports_the_cycle():
    with pytest.raises(CycleError) as exc_info:
        build_graph([(1, "a"), (2, "b"), (3, "c")], [(1, 2), (2, 3), (3, 1)])
    cycle = exc_info.value.cycle
    assert cycle[0] == cycle[-1]
    assert set(cycle) == {1, 2, 3}


def test_node_lookup_of_unknown_key():
    with pytest.raises(UnknownNodeError):
        minimal_workflow().node(7)


def test_induced_subgraph_keeps_edges_between_chosen_nodes():
    sub = induced_subgraph(diamond_w3(), [1, 2, 4])
    assert sub.internal_indices == (1, 2, 4)
    assert sub.edges == frozenset({(1, 2), (2, 4)})


def test_induced_subgraph_rejects_unknown_nodes():
    with pytest.raises(UnknownNodeError):
        induced_subgraph(diamond_w3(), [1, 9])


def test_strip_terminals_drops_terminal_edges():
    stripped = strip_terminals(diamond_w3())
    assert stripped.keys == (1, 2, 3, 4)
    assert stripped.edges == diamond_w3().internal_edges


def test_strip_terminals_keeps_every_internal_relation():
    rng = random.Random(31)
    for _ in range(500):
        graph = gen_random_dag(RandomDagSpec(min_nodes=1, max_nodes=9, edge_probability=rng.random()), rng)
        stripped = strip_terminals(graph)
        assert not stripped.has_terminals
        assert stripped.internal_nodes == graph.internal_nodes
        assert stripped.edges == graph.internal_edges
        for src in graph.internal_indices:
            for dst in graph.internal_indices:
                assert stripped.has_edge(src, dst) == graph.has_edge(src, dst)


def test_transitive_reduction_removes_implied_edges():
    graph = graph_from_adjacency({1: "a", 2: "b", 3: "c"}, {1: [2, 3], 2: [3]})
    reduced = transitive_reduction(graph)
    assert (1, 3) not in reduced.edges
    assert {(1, 2), (2, 3), (START, 1), (3, END)} == set(reduced.edges)


def test_promote_terminals_turns_them_into_ordinary_nodes():
    graph = linear_graph(2)
    chain = NodeChain.from_indices(graph, [1, 2])

    promoted, promoted_chain = promote_terminals(graph, chain)

    assert [node.label for node in promoted.nodes] == [START, "step 1", "step 2", END]
    assert promoted.internal_indices == (1, 2, 3, 4)
    assert promoted.edges == frozenset({(1, 2), (2, 3), (3, 4)})
    assert promoted_chain.indices == (1, 2, 3, 4)


def test_node_chain_rejects_repeated_nodes():
    graph = linear_graph(2)
    with pytest.raises(DuplicateIndexError):
        NodeChain.from_indices(graph, [1, 1])


def test_graph_from_adjacency_wires_sources_and_sinks():
    graph = diamond_w3()
    assert (START, 1) in graph.edges
    assert (4, END) in graph.edges
    assert edge_count(graph) == 6
    assert edge_count(graph, include_terminals=False) == 4


def test_graph_from_adjacency_without_terminal_edges():
    graph = graph_from_adjacency({1: "a", 2: "b"}, {1: [2]}, terminals=False)
    assert graph.edges == frozenset({(1, 2)})
