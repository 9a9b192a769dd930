# evaluation/harness.py

import asyncio
import statistics
from collections import Counter
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

import providers  # noqa: F401 # pylint: disable=unused-import
from config.settings import settings
from core.base_provider import BaseSimilarityProvider
from core.errors import JoinError
from core.graph import NodeChain, WorkflowGraph, promote_terminals, strip_terminals, transitive_reduction
from core.logging import get_logger
from core.registry import get_provider
from core.topo import count_topo_orders
from evaluation.chain_eval import ChainScore, score_chain
from evaluation.graph_eval import GraphScore, score_graph
from evaluation.matcher import max_weight_matching
from evaluation.similarity import SimilarityConfig, SimilarityMatrix, abuild_similarity_matrix, validate_provider_name
from parsing.records import SCENARIO_ORDER, GoldSample, Prediction, Scenario, load_dataset, load_predictions

logger = get_logger(__name__)

PathLike = Union[str, Path]

TOPO_BUCKETS: Tuple[int, ...] = (5, 10, 20, 50, 100)


class EvalConfig(BaseModel):
    """Effective parameters of one evaluation run."""

    model_config = ConfigDict(frozen=True)

    beta: float = Field(default=settings.BETA, ge=0.0, le=1.0)
    topo_cap: int = Field(default=settings.TOPO_CAP, ge=1)
    provider: str = settings.PROVIDER
    provider_path: Optional[str] = None
    embed_endpoint: Optional[str] = None
    include_terminals: bool = False
    transitive_reduction: bool = False
    strict: bool = False
    workers: int = Field(default=settings.WORKERS, ge=1)

    @field_validator("provider")
    @classmethod
    def _known_provider(cls, value: str) -> str:
        return validate_provider_name(value)

    @property
    def similarity(self) -> SimilarityConfig:
        return SimilarityConfig(beta=self.beta, provider=self.provider)

    def snapshot(self) -> Dict[str, Any]:
        """Parameters that determine the scores; the worker count never does."""
        return {
            "beta": self.beta,
            "topo_cap": self.topo_cap,
            "provider": self.provider,
            "include_terminals": self.include_terminals,
            "transitive_reduction": self.transitive_reduction,
            "strict": self.strict,
        }


class SampleResult(BaseModel):
    id: str
    scenario: Scenario
    chain: ChainScore
    graph: GraphScore
    format_error: bool = False
    format_error_category: Optional[str] = None
    missing_prediction: bool = False
    gold_nodes: int = 0
    pred_nodes: int = 0
    matched: int = 0


class ScenarioSummary(BaseModel):
    scenario: Scenario
    samples: int
    f1_chain: float
    f1_graph: float
    precision_chain: float
    recall_chain: float
    precision_graph: float
    recall_graph: float
    format_errors: int
    missing: int

    @property
    def gap(self) -> float:
        return self.f1_chain - self.f1_graph


class Report(BaseModel):
    scenarios: List[ScenarioSummary] = Field(default_factory=list)
    # unweighted mean over the scenarios present
    average_f1_chain: float = 0.0
    average_f1_graph: float = 0.0
    # mean over samples
    micro_f1_chain: float = 0.0
    micro_f1_graph: float = 0.0
    sample_count: int = 0
    format_error_count: int = 0
    missing_count: int = 0
    config: Dict[str, Any] = Field(default_factory=dict)

    @property
    def average_gap(self) -> float:
        return self.average_f1_chain - self.average_f1_graph

    @property
    def scored_count(self) -> int:
        return self.sample_count - self.format_error_count - self.missing_count


class DatasetStats(BaseModel):
    sample_count: int
    # share of samples (percent) whose topological-order count is <= each bucket bound
    topo_buckets: Dict[int, float]
    mean_nodes: float
    median_nodes: float
    mean_edges: float
    node_histogram: Dict[int, int]
    scenario_counts: Dict[str, int]


def _prepare(graph: WorkflowGraph, chain: NodeChain, config: EvalConfig) -> Tuple[WorkflowGraph, NodeChain]:
    if config.transitive_reduction:
        graph = transitive_reduction(graph)
    if config.include_terminals:
        return promote_terminals(graph, chain)
    return strip_terminals(graph), chain


def _zero_result(sample: GoldSample, **flags: Any) -> SampleResult:
    return SampleResult(
        id=sample.id,
        scenario=sample.scenario,
        chain=ChainScore(),
        graph=GraphScore(),
        gold_nodes=len(sample.gold_graph.internal_indices),
        **flags,
    )


def _score_matrix(
    sample: GoldSample,
    gold: Tuple[WorkflowGraph, NodeChain],
    pred: Tuple[WorkflowGraph, NodeChain],
    matrix: SimilarityMatrix,
    config: EvalConfig,
) -> SampleResult:
    gold_graph, _ = gold
    pred_graph, pred_chain = pred
    corr = max_weight_matching(matrix)
    chain = score_chain(gold_graph, pred_chain, corr, config.topo_cap)
    graph = score_graph(gold_graph, pred_graph, len(pred_chain), corr)
    return SampleResult(
        id=sample.id,
        scenario=sample.scenario,
        chain=chain,
        graph=graph,
        gold_nodes=len(gold_graph.internal_indices),
        pred_nodes=len(pred_chain),
        matched=len(corr),
    )


async def score_sample(
    sample: GoldSample,
    prediction: Optional[Prediction],
    provider: BaseSimilarityProvider,
    config: EvalConfig,
) -> SampleResult:
    """parse result -> terminal handling -> similarity matrix -> matching -> chain and graph scores."""
    if prediction is None:
        return _zero_result(sample, missing_prediction=True)
    if prediction.format_error is not None or prediction.parsed is None:
        category = prediction.format_error.category if prediction.format_error is not None else None
        return _zero_result(sample, format_error=True, format_error_category=category)

    gold = _prepare(sample.gold_graph, sample.gold_chain, config)
    pred = _prepare(prediction.parsed.graph, prediction.parsed.chain, config)
    gold_nodes = gold[0].internal_nodes
    pred_nodes = pred[0].internal_nodes

    matrix = await abuild_similarity_matrix(
        [node.label for node in gold_nodes],
        [node.label for node in pred_nodes],
        config.similarity,
        provider,
        sample_id=sample.id,
        gold_keys=[node.index for node in gold_nodes],
        pred_keys=[node.index for node in pred_nodes],
    )
    return await asyncio.to_thread(_score_matrix, sample, gold, pred, matrix, config)


def _join(samples: Sequence[GoldSample], predictions: Sequence[Prediction]) -> List[Optional[Prediction]]:
    gold_ids = {sample.id for sample in samples}
    orphans = [prediction.id for prediction in predictions if prediction.id not in gold_ids]
    if orphans:
        raise JoinError(f"Predictions without a gold sample: {', '.join(orphans[:10])}")
    by_id = {prediction.id: prediction for prediction in predictions}
    return [by_id.get(sample.id) for sample in samples]


def build_provider(config: EvalConfig) -> BaseSimilarityProvider:
    return get_provider(config.provider, path=config.provider_path, endpoint=config.embed_endpoint)


async def evaluate_samples(
    samples: Sequence[GoldSample],
    predictions: Sequence[Prediction],
    config: EvalConfig,
    provider: Optional[BaseSimilarityProvider] = None,
) -> List[SampleResult]:
    """
    Score every gold sample with a pool of ``config.workers`` workers.
    Results come back in gold order whatever the worker count.

    Raises:
        JoinError: a prediction has no gold sample.
    """
    paired = _join(samples, predictions)
    missing = sum(1 for prediction in paired if prediction is None)
    if missing:
        logger.warning("%d gold samples have no prediction and score 0", missing)

    shared = provider if provider is not None else build_provider(config)
    worker_providers = [shared]
    if not shared.supports_concurrency:
        worker_providers += [build_provider(config) for _ in range(config.workers - 1)]

    queue: asyncio.Queue = asyncio.Queue()
    for position, (sample, prediction) in enumerate(zip(samples, paired)):
        queue.put_nowait((position, sample, prediction))

    results: List[Optional[SampleResult]] = [None] * len(samples)

    async def worker(worker_provider: BaseSimilarityProvider) -> None:
        while True:
            try:
                position, sample, prediction = queue.get_nowait()
            except asyncio.QueueEmpty:
                return
            results[position] = await score_sample(sample, prediction, worker_provider, config)

    try:
        await asyncio.gather(*(worker(worker_providers[n % len(worker_providers)]) for n in range(config.workers)))
    finally:
        for owned in worker_providers:
            if owned is not provider:
                await owned.aclose()

    logger.info("Scored %d samples with %d workers", len(samples), config.workers)
    return [result for result in results if result is not None]


async def aevaluate(gold_path: PathLike, pred_path: PathLike, config: EvalConfig) -> List[SampleResult]:
    samples = load_dataset(gold_path)
    predictions = load_predictions(pred_path, strict=config.strict)
    return await evaluate_samples(samples, predictions, config)


def evaluate(gold_path: PathLike, pred_path: PathLike, config: EvalConfig) -> List[SampleResult]:
    """Load gold samples and predictions and score every gold sample."""
    return asyncio.run(aevaluate(gold_path, pred_path, config))


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def aggregate(results: Sequence[SampleResult], config: Optional[EvalConfig] = None) -> Report:
    """Per-scenario means, their unweighted average, and the per-sample micro average."""
    snapshot = config.snapshot() if config is not None else {}
    if not results:
        return Report(config=snapshot)

    summaries: List[ScenarioSummary] = []
    for scenario in SCENARIO_ORDER:
        group = [result for result in results if result.scenario is scenario]
        if not group:
            continue
        summaries.append(
            ScenarioSummary(
                scenario=scenario,
                samples=len(group),
                f1_chain=_mean([result.chain.f1 for result in group]),
                f1_graph=_mean([result.graph.f1 for result in group]),
                precision_chain=_mean([result.chain.precision for result in group]),
                recall_chain=_mean([result.chain.recall for result in group]),
                precision_graph=_mean([result.graph.precision for result in group]),
                recall_graph=_mean([result.graph.recall for result in group]),
                format_errors=sum(1 for result in group if result.format_error),
                missing=sum(1 for result in group if result.missing_prediction),
            )
        )

    return Report(
        scenarios=summaries,
        average_f1_chain=_mean([summary.f1_chain for summary in summaries]),
        average_f1_graph=_mean([summary.f1_graph for summary in summaries]),
        micro_f1_chain=_mean([result.chain.f1 for result in results]),
        micro_f1_graph=_mean([result.graph.f1 for result in results]),
        sample_count=len(results),
        format_error_count=sum(1 for result in results if result.format_error),
        missing_count=sum(1 for result in results if result.missing_prediction),
        config=snapshot,
    )


def compute_stats(samples: Sequence[GoldSample]) -> DatasetStats:
    """Topological-order buckets, node/edge counts and scenario sizes of a dataset."""
    if not samples:
        return DatasetStats(
            sample_count=0,
            topo_buckets={bound: 0.0 for bound in TOPO_BUCKETS},
            mean_nodes=0.0,
            median_nodes=0.0,
            mean_edges=0.0,
            node_histogram={},
            scenario_counts={},
        )

    # one past the largest bound tells "more than 100" apart
    limit = TOPO_BUCKETS[-1] + 1
    order_counts = [count_topo_orders(sample.gold_graph, limit) for sample in samples]
    node_counts = [len(sample.gold_graph.internal_indices) for sample in samples]
    edge_counts = [len(sample.gold_graph.edges) for sample in samples]
    scenarios = Counter(sample.scenario.value for sample in samples)

    return DatasetStats(
        sample_count=len(samples),
        topo_buckets={
            bound: 100.0 * sum(1 for count in order_counts if count <= bound) / len(samples) for bound in TOPO_BUCKETS
        },
        mean_nodes=statistics.fmean(node_counts),
        median_nodes=float(statistics.median(node_counts)),
        mean_edges=statistics.fmean(edge_counts),
        node_histogram=dict(sorted(Counter(node_counts).items())),
        scenario_counts={
            scenario.value: scenarios[scenario.value] for scenario in SCENARIO_ORDER if scenarios[scenario.value]
        },
    )


def dataset_stats(gold_path: PathLike) -> DatasetStats:
    """Statistics of a dataset file, loaded without the post-QC checks."""
    return compute_stats(load_dataset(gold_path, validate=False))
