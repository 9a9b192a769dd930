# evaluation/matcher.py

"""
Maximum-weight bipartite matching between gold and predicted nodes.

The optimal total comes from the Hungarian solver in scipy. Among all
pairings reaching that total, the lexicographically smallest pair list is
chosen by fixing gold rows in ascending order, each to the smallest
predicted column that still lets the remaining rows reach the optimum.
"""

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from evaluation.similarity import SimilarityMatrix

# Slack when comparing float totals of alternative pairings
TOTAL_TOLERANCE = 1e-9


class MatchedPair(NamedTuple):
    gold: int
    pred: int
    weight: float


@dataclass(frozen=True)
class NodeCorrespondence:
    """One-to-one pairs of gold and predicted node indices, sorted by gold index."""

    pairs: Tuple[MatchedPair, ...] = ()

    def __post_init__(self) -> None:
        gold = [pair.gold for pair in self.pairs]
        pred = [pair.pred for pair in self.pairs]
        if len(set(gold)) != len(gold) or len(set(pred)) != len(pred):
            raise ValueError("A node correspondence must be one-to-one")

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def total_weight(self) -> float:
        return float(sum(pair.weight for pair in self.pairs))

    @property
    def gold_indices(self) -> Tuple[int, ...]:
        return tuple(pair.gold for pair in self.pairs)

    @property
    def pred_indices(self) -> Tuple[int, ...]:
        return tuple(pair.pred for pair in self.pairs)

    @property
    def pred_to_gold(self) -> Dict[int, int]:
        return {pair.pred: pair.gold for pair in self.pairs}

    @property
    def gold_to_pred(self) -> Dict[int, int]:
        return {pair.gold: pair.pred for pair in self.pairs}

    def without(self, gold: int) -> "NodeCorrespondence":
        """A copy with the pair of gold node ``gold`` removed."""
        return NodeCorrespondence(tuple(pair for pair in self.pairs if pair.gold != gold))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[int, int, float]]) -> "NodeCorrespondence":
        return cls(tuple(sorted(MatchedPair(*pair) for pair in pairs)))


def _best_total(values: np.ndarray, rows: Sequence[int], cols: Sequence[int]) -> float:
    """Maximum total weight of a matching restricted to ``rows`` x ``cols``."""
    if not rows or not cols:
        return 0.0
    sub = values[np.ix_(rows, cols)]
    row_ind, col_ind = linear_sum_assignment(sub, maximize=True)
    return float(sub[row_ind, col_ind].sum())


def max_weight_matching(matrix: SimilarityMatrix) -> NodeCorrespondence:
    """
    Pair gold and predicted nodes one-to-one maximizing the total similarity,
    using only nonzero entries. Ties between optimal pairings resolve to the
    lexicographically smallest pair list.
    """
    values = matrix.values
    rows = sorted(range(len(matrix.gold_keys)), key=lambda row: matrix.gold_keys[row])
    cols = sorted(range(len(matrix.pred_keys)), key=lambda col: matrix.pred_keys[col])
    if not rows or not cols or not np.any(values > 0):
        return NodeCorrespondence()

    budget = _best_total(values, rows, cols)
    free = list(cols)
    collected = 0.0
    pairs: List[MatchedPair] = []

    for position, row in enumerate(rows):
        remaining_rows = rows[position + 1 :]
        for col in free:
            weight = float(values[row, col])
            if weight <= 0:
                continue
            others = [other for other in free if other != col]
            reachable = collected + weight + _best_total(values, remaining_rows, others)
            if reachable >= budget - TOTAL_TOLERANCE:
                pairs.append(MatchedPair(matrix.gold_keys[row], matrix.pred_keys[col], weight))
                collected += weight
                free = others
                break

    return NodeCorrespondence(tuple(pairs))
