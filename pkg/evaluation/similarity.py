# evaluation/similarity.py

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from config.settings import settings
from core.base_provider import BaseSimilarityProvider
from core.registry import PROVIDER_ALIASES, resolve_provider_name

PROVIDER_NAMES: Tuple[str, ...] = tuple(sorted(set(PROVIDER_ALIASES.values())))


def validate_provider_name(name: str) -> str:
    resolved = resolve_provider_name(name)
    if resolved not in PROVIDER_NAMES:
        raise ValueError(f"unknown similarity provider {name!r}; expected one of {', '.join(PROVIDER_NAMES)}")
    return resolved


class SimilarityConfig(BaseModel):
    """Threshold and provider choice for building similarity matrices."""

    model_config = ConfigDict(frozen=True)

    beta: float = Field(default=settings.BETA, ge=0.0, le=1.0)
    provider: str = settings.PROVIDER

    @field_validator("provider")
    @classmethod
    def _known_provider(cls, value: str) -> str:
        return validate_provider_name(value)


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """
    Thresholded similarities: rows are gold nodes, columns predicted nodes.
    Every entry is either 0 or at least ``beta``.
    """

    values: np.ndarray
    gold_keys: Tuple[int, ...]
    pred_keys: Tuple[int, ...]
    beta: float

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.gold_keys), len(self.pred_keys)):
            raise ValueError(
                f"Matrix shape {self.values.shape} does not match {len(self.gold_keys)} gold x {len(self.pred_keys)} predicted nodes"
            )
        if np.any((self.values != 0) & (self.values < self.beta)):
            raise ValueError(f"Matrix holds entries below the threshold {self.beta}")

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.gold_keys), len(self.pred_keys))

    def weight(self, gold: int, pred: int) -> float:
        return float(self.values[self.gold_keys.index(gold), self.pred_keys.index(pred)])


def apply_threshold(values: np.ndarray, beta: float) -> np.ndarray:
    """Zero every similarity below ``beta``."""
    values = np.asarray(values, dtype=np.float64)
    return np.where(values >= beta, values, 0.0)


def similarity(a: str, b: str, provider: BaseSimilarityProvider) -> float:
    """σ(a, b) under ``provider``, in [0, 1]."""
    return provider.similarity(a, b)


def _keys(labels: Sequence[str], keys: Optional[Sequence[int]]) -> Tuple[int, ...]:
    if keys is None:
        return tuple(range(1, len(labels) + 1))
    if len(keys) != len(labels):
        raise ValueError(f"{len(keys)} node keys given for {len(labels)} labels")
    return tuple(keys)


def build_similarity_matrix(
    gold_labels: Sequence[str],
    pred_labels: Sequence[str],
    config: SimilarityConfig,
    provider: BaseSimilarityProvider,
    *,
    sample_id: Optional[str] = None,
    gold_keys: Optional[Sequence[int]] = None,
    pred_keys: Optional[Sequence[int]] = None,
) -> SimilarityMatrix:
    """S[i][j] = σ(g_i, p_j) when it reaches ``config.beta``, else 0."""
    raw = provider.matrix(gold_labels, pred_labels, sample_id)
    return SimilarityMatrix(
        values=apply_threshold(raw, config.beta),
        gold_keys=_keys(gold_labels, gold_keys),
        pred_keys=_keys(pred_labels, pred_keys),
        beta=config.beta,
    )


async def abuild_similarity_matrix(
    gold_labels: Sequence[str],
    pred_labels: Sequence[str],
    config: SimilarityConfig,
    provider: BaseSimilarityProvider,
    *,
    sample_id: Optional[str] = None,
    gold_keys: Optional[Sequence[int]] = None,
    pred_keys: Optional[Sequence[int]] = None,
) -> SimilarityMatrix:
    """Asynchronous variant of :func:`build_similarity_matrix` for network-backed providers."""
    raw = await provider.amatrix(gold_labels, pred_labels, sample_id)
    return SimilarityMatrix(
        values=apply_threshold(raw, config.beta),
        gold_keys=_keys(gold_labels, gold_keys),
        pred_keys=_keys(pred_labels, pred_keys),
        beta=config.beta,
    )
