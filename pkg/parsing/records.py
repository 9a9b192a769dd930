# parsing/records.py

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Literal, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError, model_validator

from core.errors import FormatError, InvalidNodeError, SchemaError, WorkflowGraphError
from core.graph import NodeChain, WorkflowGraph, build_graph
from core.logging import get_logger
from core.topo import deterministic_topo_sort
from parsing.text import ParsedWorkflow, parse_structured, parse_workflow_text

logger = get_logger(__name__)

RecordT = TypeVar("RecordT", bound=BaseModel)
Endpoint = Union[StrictInt, Literal["START", "END"]]


class Scenario(str, Enum):
    FUNCTION_CALL = "function_call"
    PROBLEM_SOLVING = "problem_solving"
    EMBODIED = "embodied"
    OPEN_GROUNDED = "open_grounded"
    HELD_OUT = "held_out"


# Report column order
SCENARIO_ORDER: Tuple[Scenario, ...] = tuple(Scenario)


class GoldRecord(BaseModel):
    """One line of a dataset file."""

    model_config = ConfigDict(extra="ignore")

    id: str = Field(min_length=1)
    scenario: Scenario
    task: str = ""
    action_list: List[str] = Field(default_factory=list)
    nodes: List[str]
    edges: List[Tuple[Endpoint, Endpoint]]


class PredictionRecord(BaseModel):
    """One line of a prediction file: raw model text or structured nodes/edges."""

    model_config = ConfigDict(extra="ignore")

    id: str = Field(min_length=1)
    raw_text: Optional[str] = None
    nodes: Optional[List[str]] = None
    edges: Optional[List[Tuple[Endpoint, Endpoint]]] = None

    @model_validator(mode="after")
    def _check_payload(self) -> "PredictionRecord":
        if self.raw_text is None and self.nodes is None:
            raise ValueError("either raw_text or nodes/edges must be given")
        if self.nodes is not None and self.edges is None:
            raise ValueError("structured predictions need an edges field")
        return self


class DurationRecord(BaseModel):
    model_config = ConfigDict(extra="ignore")

    id: str = Field(min_length=1)
    durations: List[float]


@dataclass(frozen=True)
class GoldSample:
    id: str
    scenario: Scenario
    task: str
    action_list: Tuple[str, ...]
    gold_graph: WorkflowGraph
    gold_chain: NodeChain

    def to_record(self) -> GoldRecord:
        """Record form: labels in chain order, which is index order for loaded samples."""
        return GoldRecord(
            id=self.id,
            scenario=self.scenario,
            task=self.task,
            action_list=list(self.action_list),
            nodes=[node.label for node in self.gold_chain.nodes],
            edges=list(self.gold_graph.sorted_edges()),
        )


@dataclass(frozen=True)
class Prediction:
    """A prediction after parsing: exactly one of ``parsed`` and ``format_error`` is set."""

    id: str
    raw_text: Optional[str] = None
    parsed: Optional[ParsedWorkflow] = None
    format_error: Optional[FormatError] = None

    def __post_init__(self) -> None:
        if (self.parsed is None) == (self.format_error is None):
            raise ValueError("A prediction holds either a parsed workflow or a format error")


def _iter_lines(path: Union[str, Path]) -> Iterator[Tuple[int, str]]:
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if line.strip():
                yield line_no, line


def _validate_line(model: Type[RecordT], line_no: int, line: str) -> RecordT:
    try:
        return model.model_validate_json(line)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = str(error["loc"][0]) if error["loc"] else "record"
        raise SchemaError(line_no, field, error["msg"]) from exc


def sample_from_record(record: GoldRecord, line_no: int = 0) -> GoldSample:
    """Build a gold sample; node labels are indexed by their 1-based position."""
    nodes = list(enumerate(record.nodes, start=1))
    try:
        graph = build_graph(nodes, record.edges)
    except InvalidNodeError as exc:
        raise SchemaError(line_no, "nodes", str(exc)) from exc
    except WorkflowGraphError as exc:
        raise SchemaError(line_no, "edges", str(exc)) from exc
    chain = NodeChain.from_indices(graph, [index for index, _ in nodes])
    return GoldSample(
        id=record.id,
        scenario=record.scenario,
        task=record.task,
        action_list=tuple(record.action_list),
        gold_graph=graph,
        gold_chain=chain,
    )


def _check_post_filter(sample: GoldSample, line_no: int) -> None:
    graph = sample.gold_graph
    if len(graph.internal_indices) < 2:
        raise SchemaError(line_no, "nodes", "a gold workflow needs at least 2 nodes")
    if len(graph.edges) < 2:
        raise SchemaError(line_no, "edges", "a gold workflow needs at least 2 edges")
    if deterministic_topo_sort(graph).indices != sample.gold_chain.indices:
        raise SchemaError(line_no, "nodes", "node order is not the deterministic topological order of the edges")


def load_dataset(path: Union[str, Path], validate: bool = True) -> List[GoldSample]:
    """
    Load gold samples from a line-delimited dataset file.

    With ``validate`` every sample must satisfy the post-QC guarantees (at
    least 2 nodes and 2 edges, node order equal to the deterministic topological
    order); ``validate=False`` loads QC candidates as they are.

    Raises:
        FileNotFoundError: ``path`` does not exist.
        SchemaError: a record is malformed, duplicated or violates the guarantees.
    """
    samples: List[GoldSample] = []
    seen: Dict[str, int] = {}
    for line_no, line in _iter_lines(path):
        try:
            record = _validate_line(GoldRecord, line_no, line)
            if record.id in seen:
                raise SchemaError(line_no, "id", f"duplicate id {record.id!r} (first seen on line {seen[record.id]})")
            sample = sample_from_record(record, line_no)
            if validate:
                _check_post_filter(sample, line_no)
        except SchemaError as exc:
            logger.error("Rejected dataset record in %s: %s", path, exc)
            raise
        seen[record.id] = line_no
        samples.append(sample)

    logger.info("Loaded %d gold samples from %s", len(samples), path)
    return samples


def prediction_from_record(record: PredictionRecord, strict: bool = False) -> Prediction:
    """Parse one prediction record; a FormatError is kept as the diagnostic."""
    try:
        if record.raw_text is not None:
            parsed = parse_workflow_text(record.raw_text, strict=strict)
        else:
            parsed = parse_structured(record.nodes or [], record.edges or [])
    except FormatError as exc:
        logger.warning("Format error in prediction %s: %s", record.id, exc)
        return Prediction(id=record.id, raw_text=record.raw_text, format_error=exc)
    return Prediction(id=record.id, raw_text=record.raw_text, parsed=parsed)


def load_predictions(path: Union[str, Path], strict: bool = False) -> List[Prediction]:
    """
    Load and parse predictions. Unparseable workflows become ``format_error``
    diagnostics and never abort the run; malformed records do.
    """
    predictions: List[Prediction] = []
    seen: Dict[str, int] = {}
    for line_no, line in _iter_lines(path):
        record = _validate_line(PredictionRecord, line_no, line)
        if record.id in seen:
            raise SchemaError(line_no, "id", f"duplicate id {record.id!r} (first seen on line {seen[record.id]})")
        seen[record.id] = line_no
        predictions.append(prediction_from_record(record, strict=strict))

    format_errors = sum(1 for prediction in predictions if prediction.format_error is not None)
    logger.info("Loaded %d predictions from %s (%d format errors)", len(predictions), path, format_errors)
    return predictions


def load_durations(path: Union[str, Path]) -> Dict[str, Dict[int, float]]:
    """Load per-sample node durations; the value at position i belongs to node i + 1."""
    durations: Dict[str, Dict[int, float]] = {}
    for line_no, line in _iter_lines(path):
        record = _validate_line(DurationRecord, line_no, line)
        if record.id in durations:
            raise SchemaError(line_no, "id", f"duplicate id {record.id!r}")
        for value in record.durations:
            if not math.isfinite(value) or value < 0:
                raise SchemaError(line_no, "durations", f"duration {value!r} must be a non-negative number")
        durations[record.id] = {index: value for index, value in enumerate(record.durations, start=1)}
    return durations


def _write_lines(rows: Iterable[dict], path: Union[str, Path]) -> int:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(target, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row) + "\n")
            count += 1
    return count


def write_dataset(samples: Iterable[GoldSample], path: Union[str, Path]) -> int:
    """Write gold samples in the dataset record format; returns the record count."""
    return _write_lines((sample.to_record().model_dump(mode="json") for sample in samples), path)


def write_discard_report(discarded: Iterable[Tuple[str, str]], path: Union[str, Path]) -> int:
    """Write ``{id, reason}`` records for samples rejected by quality control."""
    return _write_lines(({"id": sample_id, "reason": reason} for sample_id, reason in discarded), path)
