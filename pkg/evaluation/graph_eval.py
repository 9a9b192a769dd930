# evaluation/graph_eval.py

"""
Workflow-graph scoring: the maximum common induced subgraph of the gold graph
and the predicted subgraph, under the node correspondence fixed by matching.

With the correspondence fixed, a subset of matched pairs is a common induced
subgraph exactly when every two of its pairs agree on both edge directions.
The largest such subset is a maximum clique of the pair-compatibility graph,
found with networkx and then narrowed to the smallest certificate.
"""

from typing import List, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict

from core.graph import WorkflowGraph, induced_subgraph, strip_terminals
from evaluation.chain_eval import f1_score
from evaluation.matcher import MatchedPair, NodeCorrespondence

__all__ = ["GraphScore", "induced_subgraph", "pairs_agree", "is_induced_agreement", "mcis", "score_graph"]

Certificate = Tuple[Tuple[int, int], ...]


class GraphScore(BaseModel):
    """Workflow-graph score of one sample; ``certificate`` lists (gold, predicted) pairs."""

    model_config = ConfigDict(frozen=True)

    k: int = 0
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    certificate: Certificate = ()
    empty_prediction: bool = False


def pairs_agree(pred_sub: WorkflowGraph, gold: WorkflowGraph, first: MatchedPair, second: MatchedPair) -> bool:
    """Edge presence and absence agree in both directions for the two pairs."""
    return pred_sub.has_edge(first.pred, second.pred) == gold.has_edge(first.gold, second.gold) and pred_sub.has_edge(
        second.pred, first.pred
    ) == gold.has_edge(second.gold, first.gold)


def is_induced_agreement(pred_sub: WorkflowGraph, gold: WorkflowGraph, pairs: Sequence[MatchedPair]) -> bool:
    """Check a candidate certificate independently of the search."""
    return all(
        pairs_agree(pred_sub, gold, pairs[a], pairs[b]) for a in range(len(pairs)) for b in range(a + 1, len(pairs))
    )


def _compatibility_graph(pred_sub: WorkflowGraph, gold: WorkflowGraph, pairs: Sequence[MatchedPair]) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(len(pairs)))
    graph.add_edges_from(
        (a, b)
        for a in range(len(pairs))
        for b in range(a + 1, len(pairs))
        if pairs_agree(pred_sub, gold, pairs[a], pairs[b])
    )
    return graph


def _clique_number(graph: nx.Graph) -> int:
    if graph.number_of_nodes() == 0:
        return 0
    _, size = nx.max_weight_clique(graph, weight=None)
    return int(size)


def _smallest_max_clique(graph: nx.Graph, size: int) -> List[int]:
    # ascending vertices; keep one when a clique of full size still extends the choice
    chosen: List[int] = []
    candidates = sorted(graph.nodes)
    for vertex in sorted(graph.nodes):
        if len(chosen) == size:
            break
        if vertex not in candidates:
            continue
        rest = [other for other in candidates if other > vertex and graph.has_edge(vertex, other)]
        if len(chosen) + 1 + _clique_number(graph.subgraph(rest)) >= size:
            chosen.append(vertex)
            candidates = rest
    return chosen


def mcis(pred_sub: WorkflowGraph, gold: WorkflowGraph, corr: NodeCorrespondence) -> Tuple[int, Certificate]:
    """
    Size of the largest agreeing subset of matched pairs and one subset
    realizing it, the lexicographically smallest by gold index.
    """
    pairs = sorted(corr.pairs)
    compatible = _compatibility_graph(pred_sub, gold, pairs)
    chosen = _smallest_max_clique(compatible, _clique_number(compatible))
    certificate = tuple((pairs[index].gold, pairs[index].pred) for index in chosen)
    return len(certificate), certificate


def score_graph(
    gold: WorkflowGraph, pred_graph: WorkflowGraph, pred_nodes_total: int, corr: NodeCorrespondence
) -> GraphScore:
    """
    Score a predicted workflow graph: k = MCIS size over the matched nodes,
    precision k over all predicted nodes, recall k over all gold nodes.
    """
    if pred_nodes_total == 0:
        return GraphScore(empty_prediction=True)

    gold_internal = strip_terminals(gold)
    pred_sub = induced_subgraph(strip_terminals(pred_graph), corr.pred_indices)
    k, certificate = mcis(pred_sub, gold_internal, corr)

    gold_total = len(gold_internal.internal_indices)
    precision = k / pred_nodes_total
    recall = k / gold_total if gold_total else 0.0
    return GraphScore(k=k, precision=precision, recall=recall, f1=f1_score(precision, recall), certificate=certificate)
