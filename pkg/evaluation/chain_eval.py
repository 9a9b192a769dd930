# evaluation/chain_eval.py

from bisect import bisect_left
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict

from core.graph import NodeChain, WorkflowGraph
from core.topo import DEFAULT_TOPO_CAP, enumerate_topo_orders
from evaluation.matcher import NodeCorrespondence


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean, 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


class ChainScore(BaseModel):
    """Node-chain score of one sample."""

    model_config = ConfigDict(frozen=True)

    l: int = 0
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    orders_used: int = 0
    empty_prediction: bool = False


def lis_length(seq: Sequence[int]) -> int:
    """Length of the longest strictly increasing subsequence (patience sorting)."""
    tails: List[int] = []
    for value in seq:
        pos = bisect_left(tails, value)
        if pos == len(tails):
            tails.append(value)
        else:
            tails[pos] = value
    return len(tails)


def score_chain(
    gold: WorkflowGraph,
    pred_chain: NodeChain,
    corr: NodeCorrespondence,
    cap: Optional[int] = DEFAULT_TOPO_CAP,
) -> ChainScore:
    """
    Score a predicted node chain against every enumerated topological order
    of the gold graph and keep the longest order-preserving match ``l``.

    Precision divides by all predicted nodes and recall by all gold nodes, so
    unmatched predictions count against the score.
    """
    gold_total = len(gold.internal_indices)
    pred_total = len(pred_chain)
    if pred_total == 0:
        return ChainScore(empty_prediction=True)

    pred_to_gold = corr.pred_to_gold
    matched_gold = [pred_to_gold[index] for index in pred_chain.indices if index in pred_to_gold]

    orders = enumerate_topo_orders(gold, cap)
    best = 0
    for order in orders:
        position: Dict[int, int] = {index: pos for pos, index in enumerate(order.indices)}
        best = max(best, lis_length([position[index] for index in matched_gold]))

    precision = best / pred_total
    recall = best / gold_total if gold_total else 0.0
    return ChainScore(
        l=best,
        precision=precision,
        recall=recall,
        f1=f1_score(precision, recall),
        orders_used=len(orders),
    )
