# tests/test_cli.py

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from cli.main import cli
from core.logging import setup_logging

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"
GOLD = str(FIXTURES / "gold.jsonl")
PRED = str(FIXTURES / "pred.jsonl")


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.mark.parametrize("workers", ["1", "8"])
def test_eval_reproduces_the_golden_report(runner: CliRunner, workers: str):
    result = runner.invoke(cli, ["eval", "--gold", GOLD, "--pred", PRED, "--provider", "exact", "--workers", workers])

    assert result.exit_code == 0, result.output
    assert result.stdout == (FIXTURES / "golden_report.md").read_text(encoding="utf-8")


def test_eval_csv_report(runner: CliRunner):
    result = runner.invoke(cli, ["eval", "--gold", GOLD, "--pred", PRED, "--provider", "exact", "--report", "csv"])

    lines = result.stdout.splitlines()
    assert lines[0].startswith("scenario,samples,f1_chain,f1_graph")
    assert lines[1].startswith("function_call,2,50.00,33.33")
    assert lines[-2] == "average,7,64.88,55.06,9.82"


def test_eval_jsonl_report_to_file(runner: CliRunner, tmp_path: Path):
    out = tmp_path / "reports" / "run.jsonl"

    result = runner.invoke(
        cli, ["eval", "--gold", GOLD, "--pred", PRED, "--provider", "exact", "--report", "jsonl", "--out", str(out)]
    )

    assert result.exit_code == 0
    records = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert [record["id"] for record in records[:-1]][:2] == ["fc-case-a", "fc-fmt"]
    assert records[-1]["summary"]["sample_count"] == 7


def test_eval_fails_on_orphan_predictions(runner: CliRunner, tmp_path: Path):
    pred = tmp_path / "pred.jsonl"
    pred.write_text(json.dumps({"id": "stranger", "raw_text": "Node:\n1: a\nEdge:\n"}) + "\n", encoding="utf-8")

    result = runner.invoke(cli, ["eval", "--gold", GOLD, "--pred", str(pred), "--provider", "exact"])

    assert result.exit_code == 1
    assert "stranger" in result.stderr


def test_eval_fails_on_a_malformed_dataset(runner: CliRunner, tmp_path: Path):
    gold = tmp_path / "gold.jsonl"
    gold.write_text('{"id": "x"}\n', encoding="utf-8")

    result = runner.invoke(cli, ["eval", "--gold", str(gold), "--pred", PRED, "--provider", "exact"])

    assert result.exit_code == 1


def test_eval_rejects_out_of_range_beta(runner: CliRunner):
    result = runner.invoke(cli, ["eval", "--gold", GOLD, "--pred", PRED, "--provider", "exact", "--beta", "1.5"])
    assert result.exit_code == 2


def test_qc_splits_kept_and_discarded(runner: CliRunner, tmp_path: Path):
    candidates = tmp_path / "candidates.jsonl"
    rows = [
        {"id": "ok", "scenario": "embodied", "nodes": ["a", "b"], "edges": [["START", 1], [1, 2], [2, "END"]]},
        {"id": "tiny", "scenario": "embodied", "nodes": ["a"], "edges": [["START", 1], [1, "END"]]},
        {"id": "shuffled", "scenario": "embodied", "nodes": ["b", "a"], "edges": [["START", 2], [2, 1], [1, "END"]]},
    ]
    candidates.write_text("".join(json.dumps(row) + "\n" for row in rows), encoding="utf-8")
    out = tmp_path / "kept.jsonl"

    result = runner.invoke(cli, ["qc", "--gold", str(candidates), "--out", str(out)])

    assert result.exit_code == 0, result.output
    assert "Kept 1 of 3 samples" in result.stdout
    assert [json.loads(line)["id"] for line in out.read_text(encoding="utf-8").splitlines()] == ["ok"]
    discards = [json.loads(line) for line in (tmp_path / "kept.discarded.jsonl").read_text(encoding="utf-8").splitlines()]
    assert discards == [{"id": "tiny", "reason": "too-simple"}, {"id": "shuffled", "reason": "topo-mismatch"}]


def test_stats(runner: CliRunner):
    result = runner.invoke(cli, ["stats", "--gold", GOLD])

    assert result.exit_code == 0
    assert result.stdout.startswith("Samples: 7\n")
    assert "Topological orders: <=5 85.71%, <=10 100.00%" in result.stdout


def test_critpath(runner: CliRunner):
    result = runner.invoke(cli, ["critpath", "--gold", GOLD, "--durations", str(FIXTURES / "durations.jsonl")])

    assert result.exit_code == 0
    assert "| fc-case-a | 10.00 | 5.00 | 2.000 | 3 |" in result.stdout
    assert "| emb-w3 | 8.00 | 6.00 | 1.333 | 1 -> 2 -> 4 |" in result.stdout
    assert "Time reduction: 25.00%" in result.stdout


def test_log_file_option(runner: CliRunner, tmp_path: Path):
    log_file = tmp_path / "logs" / "run.log"
    try:
        result = runner.invoke(cli, ["--log-file", str(log_file), "--debug", "stats", "--gold", GOLD])

        assert result.exit_code == 0
        assert "Loaded 7 gold samples" in log_file.read_text(encoding="utf-8")
    finally:
        setup_logging()
