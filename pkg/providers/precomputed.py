# providers/precomputed.py

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from core.base_provider import BaseSimilarityProvider
from core.errors import ProviderError
from core.logging import get_logger

logger = get_logger(__name__)


class MatrixRecord(BaseModel):
    id: str
    matrix: List[List[float]]


class VectorRecord(BaseModel):
    label: str
    vector: List[float]


def _read_records(path: Union[str, Path], model: type) -> List:
    records = []
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    records.append(model.model_validate_json(line))
                except ValidationError as exc:
                    raise ProviderError(f"{path}, line {line_no}: {exc.errors()[0]['msg']}") from exc
    except OSError as exc:
        raise ProviderError(f"Cannot read {path}: {exc}") from exc
    return records


class PrecomputedMatrixProvider(BaseSimilarityProvider):
    """
    Serves similarity matrices looked up by sample id. Rows follow the gold
    nodes and columns the predicted nodes, both in node-index order.
    """

    name = "precomputed_matrix"
    description = "Per-sample similarity matrices read from a file."

    def __init__(self, matrices: Dict[str, np.ndarray]):
        self.matrices = matrices

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "PrecomputedMatrixProvider":
        matrices: Dict[str, np.ndarray] = {}
        for record in _read_records(path, MatrixRecord):
            widths = {len(row) for row in record.matrix}
            if len(widths) > 1:
                raise ProviderError(f"Similarity matrix for sample {record.id!r} is ragged")
            width = widths.pop() if widths else 0
            matrices[record.id] = np.asarray(record.matrix, dtype=np.float64).reshape(len(record.matrix), width)
        logger.info("Loaded %d precomputed similarity matrices from %s", len(matrices), path)
        return cls(matrices)

    def _similarity(self, a: str, b: str) -> float:
        raise ProviderError("precomputed matrices are keyed by sample id and cannot score a single pair")

    def _matrix(self, gold: Sequence[str], pred: Sequence[str], sample_id: Optional[str] = None) -> np.ndarray:
        if sample_id is None or sample_id not in self.matrices:
            raise ProviderError(f"No precomputed similarity matrix for sample {sample_id!r}")
        values = self.matrices[sample_id]
        if values.shape != (len(gold), len(pred)):
            raise ProviderError(
                f"Similarity matrix for sample {sample_id!r} has shape {values.shape}, expected {(len(gold), len(pred))}"
            )
        return values


class EmbeddingVectorsProvider(BaseSimilarityProvider):
    """Cosine similarity of precomputed label embeddings, looked up by exact label text."""

    name = "embedding_vectors"
    description = "Cosine over label embeddings read from a file."

    def __init__(self, vectors: Dict[str, np.ndarray]):
        self.vectors = vectors

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "EmbeddingVectorsProvider":
        vectors: Dict[str, np.ndarray] = {}
        dimension: Optional[int] = None
        for record in _read_records(path, VectorRecord):
            vector = np.asarray(record.vector, dtype=np.float64)
            if dimension is None:
                dimension = vector.shape[0]
            if vector.shape[0] != dimension:
                raise ProviderError(f"Embedding for {record.label!r} has dimension {vector.shape[0]}, expected {dimension}")
            norm = float(np.linalg.norm(vector))
            if norm == 0.0 or not np.isfinite(norm):
                raise ProviderError(f"Embedding for {record.label!r} has no direction")
            vectors[record.label] = vector / norm
        logger.info("Loaded %d label embeddings from %s", len(vectors), path)
        return cls(vectors)

    def _lookup(self, label: str) -> np.ndarray:
        try:
            return self.vectors[label]
        except KeyError as exc:
            raise ProviderError(f"No precomputed embedding for label {label!r}") from exc

    def _similarity(self, a: str, b: str) -> float:
        return float(self._lookup(a) @ self._lookup(b))

    def _matrix(self, gold: Sequence[str], pred: Sequence[str], sample_id: Optional[str] = None) -> np.ndarray:
        if not gold or not pred:
            return np.zeros((len(gold), len(pred)), dtype=np.float64)
        gold_vectors = np.stack([self._lookup(label) for label in gold])
        pred_vectors = np.stack([self._lookup(label) for label in pred])
        return gold_vectors @ pred_vectors.T

