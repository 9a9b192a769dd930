# evaluation/report.py

import csv
import io
import json
from typing import Callable, Dict, List, Sequence

from evaluation.harness import DatasetStats, Report, SampleResult
from evaluation.schedule import ScheduleSummary
from parsing.records import Scenario

REPORT_FORMATS = ("md", "csv", "jsonl")

CSV_HEADER = [
    "scenario",
    "samples",
    "f1_chain",
    "f1_graph",
    "gap",
    "precision_chain",
    "recall_chain",
    "precision_graph",
    "recall_graph",
]

SCENARIO_TITLES: Dict[Scenario, str] = {
    Scenario.FUNCTION_CALL: "Function Call",
    Scenario.PROBLEM_SOLVING: "Problem-Solving",
    Scenario.EMBODIED: "Embodied",
    Scenario.OPEN_GROUNDED: "Open-Grounded",
    Scenario.HELD_OUT: "Held-Out",
}


def pct(value: float) -> str:
    """A score in [0, 1] as a percentage with two decimals."""
    rounded = round(100.0 * value, 2)
    if rounded == 0:
        rounded = 0.0
    return f"{rounded:.2f}"


def _config_line(config: Dict) -> str:
    parts = []
    for key, value in config.items():
        if isinstance(value, bool):
            value = str(value).lower()
        elif isinstance(value, float):
            value = f"{value:g}"
        parts.append(f"{key}={value}")
    return ", ".join(parts)


def render_markdown(report: Report) -> str:
    """Human-readable leaderboard table: scenarios as columns plus Average."""
    titles = [SCENARIO_TITLES[summary.scenario] for summary in report.scenarios]
    lines = ["# WorfEval report", ""]
    lines.append("| " + " | ".join(["Metric", *titles, "Average"]) + " |")
    lines.append("| --- |" + " ---: |" * (len(titles) + 1))

    rows = [
        ("f1_chain", [s.f1_chain for s in report.scenarios], report.average_f1_chain),
        ("f1_graph", [s.f1_graph for s in report.scenarios], report.average_f1_graph),
        ("gap", [s.gap for s in report.scenarios], report.average_gap),
    ]
    for name, values, average in rows:
        lines.append("| " + " | ".join([name, *(pct(value) for value in values), pct(average)]) + " |")
    counts = [str(s.samples) for s in report.scenarios]
    lines.append("| " + " | ".join(["samples", *counts, str(report.sample_count)]) + " |")

    lines += [
        "",
        f"Micro average over samples: f1_chain {pct(report.micro_f1_chain)}, f1_graph {pct(report.micro_f1_graph)}",
        "",
        f"Samples: {report.sample_count} (scored {report.scored_count}, format errors {report.format_error_count}, "
        f"missing predictions {report.missing_count})",
        "",
        f"Config: {_config_line(report.config)}",
    ]
    return "\n".join(lines) + "\n"


def render_csv(report: Report) -> str:
    """One row per scenario plus the macro and micro averages; scores in percent."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in report.scenarios:
        writer.writerow(
            [
                s.scenario.value,
                s.samples,
                pct(s.f1_chain),
                pct(s.f1_graph),
                pct(s.gap),
                pct(s.precision_chain),
                pct(s.recall_chain),
                pct(s.precision_graph),
                pct(s.recall_graph),
            ]
        )
    writer.writerow(
        [
            "average",
            report.sample_count,
            pct(report.average_f1_chain),
            pct(report.average_f1_graph),
            pct(report.average_gap),
        ]
    )
    writer.writerow(["micro", report.sample_count, pct(report.micro_f1_chain), pct(report.micro_f1_graph)])
    return buffer.getvalue()


def render_jsonl(results: Sequence[SampleResult], report: Report) -> str:
    """Per-sample records followed by one summary record."""
    lines = [result.model_dump_json() for result in results]
    lines.append(json.dumps({"summary": report.model_dump(mode="json")}))
    return "\n".join(lines) + "\n"


RENDERERS: Dict[str, Callable[[Sequence[SampleResult], Report], str]] = {
    "md": lambda results, report: render_markdown(report),
    "csv": lambda results, report: render_csv(report),
    "jsonl": render_jsonl,
}


def render_report(results: Sequence[SampleResult], report: Report, fmt: str = "md") -> str:
    try:
        renderer = RENDERERS[fmt]
    except KeyError as exc:
        raise ValueError(f"Unknown report format {fmt!r}; expected one of {', '.join(REPORT_FORMATS)}") from exc
    return renderer(results, report)


def render_stats(stats: DatasetStats) -> str:
    lines = [f"Samples: {stats.sample_count}"]
    if stats.scenario_counts:
        lines.append("Scenarios: " + ", ".join(f"{name} {count}" for name, count in stats.scenario_counts.items()))
    buckets = ", ".join(f"<={bound} {share:.2f}%" for bound, share in stats.topo_buckets.items())
    lines.append(f"Topological orders: {buckets}")
    lines.append(f"Nodes: mean {stats.mean_nodes:.2f}, median {stats.median_nodes:g}")
    lines.append(f"Edges: mean {stats.mean_edges:.2f}")
    histogram: List[str] = [f"{nodes}: {count}" for nodes, count in stats.node_histogram.items()]
    if histogram:
        lines.append("Node-count histogram: " + ", ".join(histogram))
    return "\n".join(lines) + "\n"


def render_schedule(summary: ScheduleSummary) -> str:
    lines = ["| id | linear | parallel | speedup | critical path |", "| --- | ---: | ---: | ---: | --- |"]
    for row in summary.rows:
        path = " -> ".join(str(index) for index in row.path)
        lines.append(f"| {row.id} | {row.linear_time:.2f} | {row.parallel_time:.2f} | {row.speedup:.3f} | {path} |")
    lines += [
        "",
        f"Mean linear time: {summary.mean_linear_time:.2f}",
        f"Mean parallel time: {summary.mean_parallel_time:.2f}",
        f"Mean speedup: {summary.mean_speedup:.3f}",
        f"Time reduction: {pct(summary.time_reduction)}%",
    ]
    return "\n".join(lines) + "\n"
