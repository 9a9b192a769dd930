# tests/test_records.py

import json
from pathlib import Path

import pytest

from core.errors import SchemaError
from parsing.records import (
    Prediction,
    Scenario,
    load_dataset,
    load_durations,
    load_predictions,
    write_dataset,
    write_discard_report,
)
from parsing.text import MISSING_EDGE_SECTION

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"


def write_lines(path: Path, rows) -> Path:
    path.write_text("".join((row if isinstance(row, str) else json.dumps(row)) + "\n" for row in rows), encoding="utf-8")
    return path


def gold_row(sample_id: str = "s1", **overrides) -> dict:
    row = {
        "id": sample_id,
        "scenario": "embodied",
        "task": "cool a potato",
        "nodes": ["find potato", "cool potato"],
        "edges": [["START", 1], [1, 2], [2, "END"]],
    }
    row.update(overrides)
    return row


def test_load_fixture_dataset():
    samples = load_dataset(FIXTURES / "gold.jsonl")

    assert [sample.id for sample in samples][:2] == ["fc-case-a", "fc-fmt"]
    assert len(samples) == 7
    emb = next(sample for sample in samples if sample.id == "emb-w3")
    assert emb.scenario is Scenario.EMBODIED
    assert emb.gold_chain.indices == (1, 2, 3, 4)
    assert emb.action_list[0] == "go to {recep}"


def test_blank_lines_are_skipped(tmp_path: Path):
    path = write_lines(tmp_path / "gold.jsonl", [gold_row("a"), "", gold_row("b")])
    assert [sample.id for sample in load_dataset(path)] == ["a", "b"]


@pytest.mark.parametrize(
    "row, field",
    [
        ({"id": "s1", "scenario": "embodied", "edges": []}, "nodes"),
        (gold_row(scenario="cooking"), "scenario"),
        (gold_row(edges=[[1, 3]]), "edges"),
        (gold_row(nodes=["only node"], edges=[["START", 1], [1, "END"]]), "nodes"),
        (gold_row(edges=[["START", 1]]), "edges"),
        (gold_row(edges=[["START", 2], [2, 1], [1, "END"]]), "nodes"),
        (gold_row(nodes=["go to\nfridge", "open fridge"]), "nodes"),
        ("{not json", "record"),
    ],
)
def test_malformed_gold_records(tmp_path: Path, row, field):
    path = write_lines(tmp_path / "gold.jsonl", [gold_row("ok"), row])

    with pytest.raises(SchemaError) as exc_info:
        load_dataset(path)

    assert exc_info.value.line == 2
    assert exc_info.value.field == field


def test_duplicate_gold_ids(tmp_path: Path):
    path = write_lines(tmp_path / "gold.jsonl", [gold_row("a"), gold_row("a")])
    with pytest.raises(SchemaError) as exc_info:
        load_dataset(path)
    assert exc_info.value.field == "id"


def test_unvalidated_load_keeps_qc_candidates(tmp_path: Path):
    row = gold_row(nodes=["b", "a"], edges=[["START", 2], [2, 1], [1, "END"]])
    path = write_lines(tmp_path / "gold.jsonl", [row])

    samples = load_dataset(path, validate=False)

    assert samples[0].gold_chain.indices == (1, 2)


def test_missing_dataset_file(tmp_path: Path):
    with pytest.raises(FileNotFoundError):
        load_dataset(tmp_path / "absent.jsonl")


def test_load_fixture_predictions():
    predictions = {prediction.id: prediction for prediction in load_predictions(FIXTURES / "pred.jsonl")}

    assert set(predictions) == {"og-self", "emb-w3", "ps-extra", "fc-case-a", "ps-rev", "fc-fmt"}
    assert predictions["fc-fmt"].format_error.category == MISSING_EDGE_SECTION
    assert predictions["fc-fmt"].parsed is None
    assert predictions["ps-extra"].raw_text is None
    assert predictions["ps-extra"].parsed.chain.indices == (1, 2, 3, 4)


@pytest.mark.parametrize("row", [{"id": "p1"}, {"id": "p1", "nodes": ["a"]}, {"raw_text": "Node:"}])
def test_malformed_prediction_records(tmp_path: Path, row):
    path = write_lines(tmp_path / "pred.jsonl", [row])
    with pytest.raises(SchemaError):
        load_predictions(path)


def test_duplicate_prediction_ids(tmp_path: Path):
    path = write_lines(tmp_path / "pred.jsonl", [{"id": "p", "raw_text": "x"}, {"id": "p", "raw_text": "y"}])
    with pytest.raises(SchemaError):
        load_predictions(path)


def test_prediction_holds_exactly_one_outcome():
    with pytest.raises(ValueError):
        Prediction(id="p")


def test_load_durations(tmp_path: Path):
    durations = load_durations(FIXTURES / "durations.jsonl")
    assert durations["emb-w3"] == {1: 1.0, 2: 4.0, 3: 2.0, 4: 1.0}

    bad = write_lines(tmp_path / "durations.jsonl", [{"id": "x", "durations": [1.0, -2.0]}])
    with pytest.raises(SchemaError) as exc_info:
        load_durations(bad)
    assert exc_info.value.field == "durations"


def test_write_dataset_round_trips(tmp_path: Path):
    samples = load_dataset(FIXTURES / "gold.jsonl")

    count = write_dataset(samples, tmp_path / "out" / "gold.jsonl")
    reloaded = load_dataset(tmp_path / "out" / "gold.jsonl")

    assert count == len(samples)
    assert [sample.gold_graph for sample in reloaded] == [sample.gold_graph for sample in samples]
    assert [sample.task for sample in reloaded] == [sample.task for sample in samples]


def test_write_discard_report(tmp_path: Path):
    path = tmp_path / "discards.jsonl"
    write_discard_report([("a", "too-simple")], path)
    assert json.loads(path.read_text(encoding="utf-8")) == {"id": "a", "reason": "too-simple"}
