# fixtures/oracles.py

"""
Brute-force reference solutions used to check the engine.

Nothing here imports the scoring engine: graphs and correspondences are read
through their ``edges`` / ``pairs`` attributes or passed as plain Python data.
"""

from itertools import combinations, permutations
from typing import Any, Iterable, List, Sequence, Set, Tuple

from core.errors import TooLargeError

MAX_MCIS_PAIRS = 12
MAX_MATCHING_SIDE = 7
MAX_TOPO_NODES = 9


def _edge_set(graph: Any) -> Set[Tuple[Any, Any]]:
    return set(getattr(graph, "edges", graph))


def _pair_list(corr: Any) -> List[Tuple[int, int]]:
    return [(pair[0], pair[1]) for pair in getattr(corr, "pairs", corr)]


def oracle_mcis(pred_sub: Any, gold: Any, corr: Any) -> int:
    """Largest subset of (gold, pred) pairs on which edges agree both ways, by trying every subset."""
    pred_edges = _edge_set(pred_sub)
    gold_edges = _edge_set(gold)
    pairs = _pair_list(corr)
    if len(pairs) > MAX_MCIS_PAIRS:
        raise TooLargeError(f"oracle_mcis accepts at most {MAX_MCIS_PAIRS} pairs, got {len(pairs)}")

    def agrees(subset: Sequence[Tuple[int, int]]) -> bool:
        for g_a, p_a in subset:
            for g_b, p_b in subset:
                if (g_a, p_a) == (g_b, p_b):
                    continue
                if ((p_a, p_b) in pred_edges) != ((g_a, g_b) in gold_edges):
                    return False
        return True

    for size in range(len(pairs), 0, -1):
        if any(agrees(subset) for subset in combinations(pairs, size)):
            return size
    return 0


def oracle_matching(matrix: Any) -> float:
    """Maximum total weight over all injective assignments of the smaller side."""
    rows = [list(map(float, row)) for row in matrix]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    if n > MAX_MATCHING_SIDE or m > MAX_MATCHING_SIDE:
        raise TooLargeError(f"oracle_matching accepts at most {MAX_MATCHING_SIDE}x{MAX_MATCHING_SIDE}, got {n}x{m}")
    if n == 0 or m == 0:
        return 0.0
    if n > m:
        rows = [list(column) for column in zip(*rows)]
        n, m = m, n

    best = 0.0
    for assignment in permutations(range(m), n):
        best = max(best, sum(rows[i][assignment[i]] for i in range(n)))
    return best


def oracle_topo_orders(indices: Iterable[int], edges: Iterable[Tuple[int, int]]) -> List[Tuple[int, ...]]:
    """Every topological order of the nodes, in lexicographic order, by filtering all permutations."""
    nodes = sorted(indices)
    if len(nodes) > MAX_TOPO_NODES:
        raise TooLargeError(f"oracle_topo_orders accepts at most {MAX_TOPO_NODES} nodes, got {len(nodes)}")
    node_set = set(nodes)
    internal = [(src, dst) for src, dst in edges if src in node_set and dst in node_set]

    orders = []
    for order in permutations(nodes):
        position = {node: pos for pos, node in enumerate(order)}
        if all(position[src] < position[dst] for src, dst in internal):
            orders.append(order)
    return orders
