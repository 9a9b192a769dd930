# fixtures/generators.py

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.graph import WorkflowGraph, graph_from_adjacency, induced_subgraph
from core.topo import deterministic_topo_sort
from evaluation.matcher import MatchedPair, NodeCorrespondence
from parsing.records import GoldSample, Scenario


@dataclass(frozen=True)
class RandomDagSpec:
    min_nodes: int = 1
    max_nodes: int = 8
    edge_probability: float = 0.3
    seed: int = 0
    terminals: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.min_nodes <= self.max_nodes:
            raise ValueError(f"Invalid node range [{self.min_nodes}, {self.max_nodes}]")
        if not 0.0 <= self.edge_probability <= 1.0:
            raise ValueError(f"Edge probability {self.edge_probability} is outside [0, 1]")


def _random_adjacency(rng: random.Random, n: int, edge_probability: float) -> Dict[int, List[int]]:
    # edges only go from lower to higher rank, so the graph stays acyclic
    ranks = list(range(1, n + 1))
    rng.shuffle(ranks)
    adjacency: Dict[int, List[int]] = {index: [] for index in range(1, n + 1)}
    for low in range(n):
        for high in range(low + 1, n):
            if rng.random() < edge_probability:
                adjacency[ranks[low]].append(ranks[high])
    return adjacency


def gen_random_dag(spec: RandomDagSpec, rng: Optional[random.Random] = None) -> WorkflowGraph:
    """Random workflow DAG; identical for identical specs when no ``rng`` is passed."""
    rng = rng if rng is not None else random.Random(spec.seed)
    n = rng.randint(spec.min_nodes, spec.max_nodes)
    adjacency = _random_adjacency(rng, n, spec.edge_probability)
    labels = {index: f"subtask {index}" for index in range(1, n + 1)}
    return graph_from_adjacency(labels, adjacency, terminals=spec.terminals)


def canonical_relabel(graph: WorkflowGraph) -> WorkflowGraph:
    """Renumber nodes by their position in the deterministic topological order."""
    order = deterministic_topo_sort(graph).indices
    new_index = {old: new for new, old in enumerate(order, start=1)}
    labels = {new_index[old]: f"subtask {new_index[old]}" for old in order}
    adjacency: Dict[int, List[int]] = {index: [] for index in labels}
    for src, dst in graph.internal_edges:
        adjacency[new_index[src]].append(new_index[dst])
    return graph_from_adjacency(labels, adjacency, terminals=graph.has_terminals)


def gen_gold_sample(
    rng: random.Random, sample_id: str, spec: RandomDagSpec, scenario: Scenario = Scenario.EMBODIED
) -> GoldSample:
    """A random gold sample whose node order is its deterministic topological order."""
    graph = canonical_relabel(gen_random_dag(spec, rng))
    return GoldSample(
        id=sample_id,
        scenario=scenario,
        task=f"random task {sample_id}",
        action_list=(),
        gold_graph=graph,
        gold_chain=deterministic_topo_sort(graph),
    )


def random_similarity_values(rng: random.Random, max_rows: int = 7, max_cols: int = 7, beta: float = 0.6) -> np.ndarray:
    """Random similarities with a share of exact ties, thresholded at ``beta``."""
    rows, cols = rng.randint(1, max_rows), rng.randint(1, max_cols)
    levels = [0.0, 0.3, 0.6, 0.7, 0.8, 0.9, 1.0]
    values = np.array(
        [[rng.choice(levels) if rng.random() < 0.5 else rng.random() for _ in range(cols)] for _ in range(rows)],
        dtype=np.float64,
    )
    return np.where(values >= beta, values, 0.0)


def gen_mcis_instance(
    rng: random.Random, max_pairs: int = 8, edge_probability: float = 0.4
) -> Tuple[WorkflowGraph, WorkflowGraph, NodeCorrespondence]:
    """
    Random (predicted subgraph, gold graph, correspondence) triple with at most
    ``max_pairs`` matched nodes. Both graphs are internal-only.
    """
    gold = gen_random_dag(RandomDagSpec(1, max_pairs, edge_probability, terminals=False), rng)
    pred = gen_random_dag(RandomDagSpec(1, max_pairs + 2, edge_probability, terminals=False), rng)
    size = rng.randint(0, min(len(gold.internal_indices), len(pred.internal_indices)))
    gold_side = rng.sample(list(gold.internal_indices), size)
    pred_side = rng.sample(list(pred.internal_indices), size)
    corr = NodeCorrespondence.from_pairs([(g, p, 1.0) for g, p in zip(gold_side, pred_side)])
    return induced_subgraph(pred, corr.pred_indices), gold, corr


def identity_correspondence(graph: WorkflowGraph) -> NodeCorrespondence:
    return NodeCorrespondence(tuple(MatchedPair(index, index, 1.0) for index in graph.internal_indices))
