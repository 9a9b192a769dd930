# evaluation/qc.py

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from core.errors import IndexMismatchError
from core.graph import NodeChain, WorkflowGraph, edge_count
from core.logging import get_logger
from core.topo import deterministic_topo_sort
from parsing.records import GoldSample

logger = get_logger(__name__)

# Keep/drop decision for one sample; True keeps it
ExternalPredicate = Callable[[GoldSample], bool]


class QcReason(str, Enum):
    OK = "ok"
    TOPO_MISMATCH = "topo-mismatch"
    TOO_SIMPLE = "too-simple"
    EXTERNAL_REJECT = "external-reject"


@dataclass(frozen=True)
class QcVerdict:
    keep: bool
    reason: QcReason = QcReason.OK


KEEP = QcVerdict(keep=True)


@dataclass
class QcResult:
    kept: List[GoldSample] = field(default_factory=list)
    discarded: List[Tuple[GoldSample, QcReason]] = field(default_factory=list)
    rates: Dict[QcReason, float] = field(default_factory=dict)

    @property
    def discard_rate(self) -> float:
        total = len(self.kept) + len(self.discarded)
        return len(self.discarded) / total if total else 0.0


def check_topo_consistency(graph: WorkflowGraph, chain: NodeChain) -> bool:
    """True iff the chain is exactly the deterministic (smallest-index-first) topological order."""
    if sorted(chain.indices) != sorted(graph.internal_indices):
        raise IndexMismatchError(
            f"Chain {list(chain.indices)} does not cover the graph nodes {list(graph.internal_indices)}"
        )
    return deterministic_topo_sort(graph).indices == chain.indices


def filter_complexity(graph: WorkflowGraph) -> QcVerdict:
    """Discard workflows with at most 1 internal node or at most 1 edge (terminal edges counted)."""
    if len(graph.internal_indices) <= 1 or edge_count(graph, include_terminals=True) <= 1:
        return QcVerdict(keep=False, reason=QcReason.TOO_SIMPLE)
    return KEEP


def qc_verdict(sample: GoldSample, external_predicate: Optional[ExternalPredicate] = None) -> QcVerdict:
    verdict = filter_complexity(sample.gold_graph)
    if not verdict.keep:
        return verdict
    if not check_topo_consistency(sample.gold_graph, sample.gold_chain):
        return QcVerdict(keep=False, reason=QcReason.TOPO_MISMATCH)
    if external_predicate is not None and not external_predicate(sample):
        return QcVerdict(keep=False, reason=QcReason.EXTERNAL_REJECT)
    return KEEP


def run_qc(samples: Sequence[GoldSample], external_predicate: Optional[ExternalPredicate] = None) -> QcResult:
    """
    Apply the complexity filter, the topological-consistency check and the
    optional external predicate; report the discard rate of each filter.
    """
    result = QcResult()
    for sample in samples:
        verdict = qc_verdict(sample, external_predicate)
        if verdict.keep:
            result.kept.append(sample)
        else:
            result.discarded.append((sample, verdict.reason))

    total = len(samples)
    for reason in (QcReason.TOO_SIMPLE, QcReason.TOPO_MISMATCH, QcReason.EXTERNAL_REJECT):
        count = sum(1 for _, discarded_reason in result.discarded if discarded_reason is reason)
        result.rates[reason] = count / total if total else 0.0

    logger.info("QC kept %d of %d samples", len(result.kept), total)
    return result
