# scripts/build_fixture_corpus.py

import json
import logging
from pathlib import Path

from evaluation.harness import EvalConfig, aggregate, evaluate
from evaluation.report import render_markdown
from fixtures.instances import FIXTURE_CASES, PREDICTION_ORDER
from parsing.records import load_dataset, sample_from_record, write_dataset

# --- Configuration ---
FIXTURE_PATH = Path("data/fixtures")
GOLD_FILE = FIXTURE_PATH / "gold.jsonl"
PRED_FILE = FIXTURE_PATH / "pred.jsonl"
DURATIONS_FILE = FIXTURE_PATH / "durations.jsonl"
GOLDEN_REPORT_FILE = FIXTURE_PATH / "golden_report.md"

logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")


def write_jsonl(rows, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row) + "\n")


def build_fixture_corpus() -> None:
    """
    Writes the fixture dataset, predictions and durations, then scores them
    with the exact provider and stores the resulting report as the golden file.
    """
    FIXTURE_PATH.mkdir(parents=True, exist_ok=True)

    # 1. Gold samples, validated exactly as the loader will see them
    samples = [sample_from_record(case.gold_record()) for case in FIXTURE_CASES]
    write_dataset(samples, GOLD_FILE)
    load_dataset(GOLD_FILE)
    logging.info("Wrote %d gold samples to '%s'.", len(samples), GOLD_FILE)

    # 2. Predictions, deliberately not in gold order
    by_id = {case.id: case for case in FIXTURE_CASES}
    write_jsonl((by_id[sample_id].prediction_record() for sample_id in PREDICTION_ORDER), PRED_FILE)
    logging.info("Wrote %d predictions to '%s'.", len(PREDICTION_ORDER), PRED_FILE)

    # 3. Node durations for the critical-path command
    durations = [{"id": case.id, "durations": list(case.durations)} for case in FIXTURE_CASES if case.durations]
    write_jsonl(durations, DURATIONS_FILE)
    logging.info("Wrote %d duration records to '%s'.", len(durations), DURATIONS_FILE)

    # 4. Golden report under the exact provider
    config = EvalConfig(provider="exact")
    results = evaluate(GOLD_FILE, PRED_FILE, config)
    GOLDEN_REPORT_FILE.write_text(render_markdown(aggregate(results, config)), encoding="utf-8")
    logging.info("Golden report written to '%s'.", GOLDEN_REPORT_FILE)


if __name__ == "__main__":
    build_fixture_corpus()
