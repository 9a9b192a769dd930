# tests/test_harness.py

import random
from pathlib import Path

import pytest

from core.errors import JoinError
from core.graph import NodeChain, graph_from_adjacency
from evaluation.harness import EvalConfig, aevaluate, aggregate, compute_stats, evaluate_samples, score_sample
from fixtures.generators import RandomDagSpec, gen_gold_sample
from fixtures.instances import FIXTURE_CASES, linear_graph, parallel_graph
from parsing.records import (
    GoldSample,
    Prediction,
    PredictionRecord,
    Scenario,
    load_dataset,
    load_predictions,
    prediction_from_record,
)
from parsing.text import MISSING_EDGE_SECTION, parse_workflow_text, serialize_workflow
from providers.lexical import ExactMatchProvider

pytestmark = pytest.mark.asyncio

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"
EXACT = EvalConfig(provider="exact")


def gold_sample(sample_id: str, graph, scenario: Scenario = Scenario.PROBLEM_SOLVING) -> GoldSample:
    return GoldSample(
        id=sample_id,
        scenario=scenario,
        task="",
        action_list=(),
        gold_graph=graph,
        gold_chain=NodeChain.from_indices(graph, graph.internal_indices),
    )


def text_prediction(sample_id: str, text: str) -> Prediction:
    return prediction_from_record(PredictionRecord(id=sample_id, raw_text=text))


async def test_fixture_corpus_scores():
    """Every fixture sample gets the score worked out by hand."""
    results = {result.id: result for result in await aevaluate(FIXTURES / "gold.jsonl", FIXTURES / "pred.jsonl", EXACT)}

    for case in FIXTURE_CASES:
        assert results[case.id].chain.f1 == pytest.approx(case.expected_f1_chain), case.id
        assert results[case.id].graph.f1 == pytest.approx(case.expected_f1_graph), case.id

    assert results["fc-fmt"].format_error
    assert results["fc-fmt"].format_error_category == MISSING_EDGE_SECTION
    assert results["emb-miss"].missing_prediction
    assert results["emb-w3"].graph.certificate == ((1, 1), (3, 2))


async def test_fixture_corpus_aggregate():
    results = await aevaluate(FIXTURES / "gold.jsonl", FIXTURES / "pred.jsonl", EXACT)

    report = aggregate(results, EXACT)

    assert [summary.scenario for summary in report.scenarios] == [
        Scenario.FUNCTION_CALL,
        Scenario.PROBLEM_SOLVING,
        Scenario.EMBODIED,
        Scenario.OPEN_GROUNDED,
    ]
    assert report.average_f1_chain == pytest.approx(109 / 168)
    assert report.average_f1_graph == pytest.approx(185 / 336)
    assert report.micro_f1_chain == pytest.approx(88 / 147)
    assert report.micro_f1_graph == pytest.approx(143 / 294)
    assert (report.sample_count, report.scored_count, report.format_error_count, report.missing_count) == (7, 5, 1, 1)
    assert report.config["provider"] == "exact"
    assert "workers" not in report.config


async def test_results_do_not_depend_on_worker_count():
    samples = load_dataset(FIXTURES / "gold.jsonl")
    predictions = load_predictions(FIXTURES / "pred.jsonl")

    single = await evaluate_samples(samples, predictions, EvalConfig(provider="exact", workers=1))
    pooled = await evaluate_samples(samples, predictions, EvalConfig(provider="exact", workers=8))

    assert [result.id for result in pooled] == [sample.id for sample in samples]
    assert [result.model_dump() for result in pooled] == [result.model_dump() for result in single]


async def test_orphan_prediction_is_a_join_error():
    samples = [gold_sample("a", linear_graph(2))]
    predictions = [text_prediction("b", serialize_workflow(linear_graph(2)))]

    with pytest.raises(JoinError):
        await evaluate_samples(samples, predictions, EXACT)


async def test_self_evaluation_scores_one():
    """1,000 random gold workflows scored against their own serialization."""
    rng = random.Random(2024)
    samples = [gen_gold_sample(rng, f"s{n}", RandomDagSpec(max_nodes=8, edge_probability=rng.random())) for n in range(1000)]
    predictions = [text_prediction(sample.id, serialize_workflow(sample.gold_graph)) for sample in samples]

    results = await evaluate_samples(samples, predictions, EXACT, provider=ExactMatchProvider())

    assert all(result.chain.f1 == 1.0 for result in results)
    assert all(result.graph.f1 == 1.0 for result in results)


async def test_transitive_reduction_ignores_implied_edges():
    gold = gold_sample("t", graph_from_adjacency({1: "a", 2: "b", 3: "c"}, {1: [2, 3], 2: [3]}))
    prediction = Prediction(id="t", parsed=parse_workflow_text("Node:\n1: a\n2: b\n3: c\nEdge:\n(START, 1) (1, 2) (2, 3) (3, END)"))

    plain = await score_sample(gold, prediction, ExactMatchProvider(), EXACT)
    reduced = await score_sample(gold, prediction, ExactMatchProvider(), EvalConfig(provider="exact", transitive_reduction=True))

    assert plain.graph.k == 2
    assert reduced.graph.k == 3
    assert reduced.graph.f1 == 1.0


async def test_include_terminals_scores_them_as_nodes():
    gold = gold_sample("t", linear_graph(2))
    prediction = text_prediction("t", serialize_workflow(linear_graph(2)))

    result = await score_sample(gold, prediction, ExactMatchProvider(), EvalConfig(provider="exact", include_terminals=True))

    assert result.gold_nodes == 4
    assert result.matched == 4
    assert result.graph.f1 == 1.0


async def test_aggregate_of_nothing():
    report = aggregate([])
    assert report.sample_count == 0
    assert report.scenarios == []


async def test_eval_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(beta=1.5)
    with pytest.raises(ValueError):
        EvalConfig(workers=0)
    assert EvalConfig(provider="token").provider == "token_cosine"


async def test_dataset_stats_buckets():
    samples = [gold_sample("line", linear_graph(5)), gold_sample("wide", parallel_graph(5))]

    stats = compute_stats(samples)

    # 1 order for the chain; 120 for five parallel steps
    assert stats.topo_buckets == {5: 50.0, 10: 50.0, 20: 50.0, 50: 50.0, 100: 50.0}
    assert stats.mean_nodes == 5.0
    assert stats.node_histogram == {5: 2}
    assert stats.scenario_counts == {"problem_solving": 2}
