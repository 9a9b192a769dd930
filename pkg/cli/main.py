# cli/main.py

import asyncio
import logging
from pathlib import Path
from typing import NoReturn, Optional

import click
from pydantic import ValidationError

import providers  # noqa: F401 # pylint: disable=unused-import
from config.settings import settings
from core.errors import WorfEvalError
from core.logging import get_logger, setup_logging
from core.registry import PROVIDER_ALIASES
from evaluation.harness import EvalConfig, aggregate, dataset_stats, evaluate_samples
from evaluation.qc import run_qc
from evaluation.report import REPORT_FORMATS, render_report, render_schedule, render_stats
from evaluation.schedule import schedule_report
from parsing.records import load_dataset, load_durations, load_predictions, write_dataset, write_discard_report

# configure logging
setup_logging()
logger = get_logger(__name__)

PROVIDER_CHOICES = sorted(set(PROVIDER_ALIASES) | set(PROVIDER_ALIASES.values()))

existing_file = click.Path(exists=True, dir_okay=False, path_type=Path)


def _fail(exc: Exception) -> NoReturn:
    logger.error("Command failed: %s", exc)
    click.secho(f"Error: {exc}", fg="red", err=True)
    raise SystemExit(1) from exc


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.info("Report written to %s", out)


@click.group()
@click.option("--log-file", default=None, help=f"Log file path [default: {settings.LOG_FILE}].")
@click.option("--debug", is_flag=True, help="Log at DEBUG level.")
def cli(log_file: Optional[str], debug: bool) -> None:
    """WorfEval: score agent-generated workflows against gold workflows."""
    if log_file is not None or debug:
        setup_logging(log_file=log_file, level=logging.DEBUG if debug else None)


@cli.command("eval")
@click.option("--gold", "gold_path", required=True, type=existing_file, help="Gold dataset (line-delimited records).")
@click.option("--pred", "pred_path", required=True, type=existing_file, help="Predictions (line-delimited records).")
@click.option("--beta", default=settings.BETA, show_default=True, type=float, help="Similarity threshold.")
@click.option("--topo-cap", default=settings.TOPO_CAP, show_default=True, type=int, help="Max gold topological orders.")
@click.option(
    "--provider", default=settings.PROVIDER, show_default=True, type=click.Choice(PROVIDER_CHOICES), help="Similarity provider."
)
@click.option("--embed-endpoint", default=None, help="Embedding service URL (WORFEVAL_EMBED_ENDPOINT takes precedence).")
@click.option("--sim-file", default=None, type=existing_file, help="Precomputed similarity matrices (sim-file provider).")
@click.option("--embed-file", default=None, type=existing_file, help="Precomputed label embeddings (embed-file provider).")
@click.option("--include-terminals", is_flag=True, help="Score START/END as ordinary nodes.")
@click.option("--transitive-reduction", is_flag=True, help="Drop implied edges from both graphs before scoring.")
@click.option("--strict", is_flag=True, help="Parse predictions with the strict grammar.")
@click.option("--workers", default=settings.WORKERS, show_default=True, type=int, help="Concurrent scoring workers.")
@click.option("--report", "report_format", default="md", show_default=True, type=click.Choice(REPORT_FORMATS))
@click.option("--out", default=None, type=click.Path(dir_okay=False, path_type=Path), help="Write the report here.")
def eval_command(
    gold_path: Path,
    pred_path: Path,
    beta: float,
    topo_cap: int,
    provider: str,
    embed_endpoint: Optional[str],
    sim_file: Optional[Path],
    embed_file: Optional[Path],
    include_terminals: bool,
    transitive_reduction: bool,
    strict: bool,
    workers: int,
    report_format: str,
    out: Optional[Path],
) -> None:
    """Score predictions against gold workflows and print a report."""
    provider_path = sim_file or embed_file
    try:
        config = EvalConfig(
            beta=beta,
            topo_cap=topo_cap,
            provider=provider,
            provider_path=str(provider_path) if provider_path else None,
            embed_endpoint=settings.EMBED_ENDPOINT or embed_endpoint,
            include_terminals=include_terminals,
            transitive_reduction=transitive_reduction,
            strict=strict,
            workers=workers,
        )
    except ValidationError as exc:
        raise click.BadParameter(str(exc)) from exc

    try:
        samples = load_dataset(gold_path)
        predictions = load_predictions(pred_path, strict=config.strict)
        results = asyncio.run(evaluate_samples(samples, predictions, config))
    except (WorfEvalError, KeyError) as exc:
        _fail(exc)

    report = aggregate(results, config)
    logger.info(
        "Evaluated %d samples: f1_chain %.4f, f1_graph %.4f",
        report.sample_count,
        report.average_f1_chain,
        report.average_f1_graph,
    )
    _emit(render_report(results, report, report_format), out)


@cli.command()
@click.option("--gold", "gold_path", required=True, type=existing_file, help="Candidate dataset.")
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Where to write kept samples.")
@click.option("--discards", default=None, type=click.Path(dir_okay=False, path_type=Path), help="Discard report path.")
def qc(gold_path: Path, out: Path, discards: Optional[Path]) -> None:
    """Apply the quality-control filters and keep the samples that pass."""
    try:
        samples = load_dataset(gold_path, validate=False)
    except WorfEvalError as exc:
        _fail(exc)

    result = run_qc(samples)
    write_dataset(result.kept, out)
    discard_path = discards or out.with_name(f"{out.stem}.discarded.jsonl")
    write_discard_report(((sample.id, reason.value) for sample, reason in result.discarded), discard_path)

    click.echo(f"Kept {len(result.kept)} of {len(samples)} samples")
    for reason, rate in result.rates.items():
        click.echo(f"  {reason.value}: {100 * rate:.2f}%")


@cli.command()
@click.option("--gold", "gold_path", required=True, type=existing_file, help="Dataset to describe.")
def stats(gold_path: Path) -> None:
    """Print dataset statistics: topological-order buckets and node counts."""
    try:
        summary = dataset_stats(gold_path)
    except WorfEvalError as exc:
        _fail(exc)
    click.echo(render_stats(summary), nl=False)


@cli.command()
@click.option("--gold", "gold_path", required=True, type=existing_file, help="Gold dataset.")
@click.option("--durations", "durations_path", required=True, type=existing_file, help="Per-node durations.")
def critpath(gold_path: Path, durations_path: Path) -> None:
    """Compare linear and parallel execution time of gold workflows."""
    try:
        summary = schedule_report(load_dataset(gold_path, validate=False), load_durations(durations_path))
    except WorfEvalError as exc:
        _fail(exc)
    click.echo(render_schedule(summary), nl=False)


if __name__ == "__main__":
    cli()
