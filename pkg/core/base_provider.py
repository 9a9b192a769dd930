# core/base_provider.py

from abc import ABC, abstractmethod
from typing import Any, Optional, Sequence

import numpy as np

from core.errors import ProviderError


def clip_similarity(value: float) -> float:
    """Clamp a raw similarity (cosine may be negative or overshoot by rounding) into [0, 1]."""
    return float(min(1.0, max(0.0, value)))


class BaseSimilarityProvider(ABC):
    """Abstract base class for all similarity providers (the σ of the scoring protocol)."""

    name: str = "base_provider"
    description: str = "A brief description of how this provider scores two labels."
    # Whether one instance may serve several in-flight requests at once
    supports_concurrency: bool = True

    @abstractmethod
    def _similarity(self, a: str, b: str) -> float:
        """The synchronous core logic: similarity of two labels in [0, 1]."""
        raise NotImplementedError("This provider does not support pairwise scoring.")

    def similarity(self, a: str, b: str) -> float:
        """Public method for pairwise scoring with error handling."""
        try:
            return clip_similarity(self._similarity(a, b))
        except ProviderError:
            raise
        except Exception as e:
            raise ProviderError(f"Error while running provider {self.name} on ({a!r}, {b!r}): {e}") from e

    def _matrix(self, gold: Sequence[str], pred: Sequence[str], sample_id: Optional[str] = None) -> np.ndarray:
        """Raw similarity matrix, gold labels on rows and predicted labels on columns."""
        values = np.zeros((len(gold), len(pred)), dtype=np.float64)
        for i, a in enumerate(gold):
            for j, b in enumerate(pred):
                values[i, j] = self._similarity(a, b)
        return values

    async def _amatrix(self, gold: Sequence[str], pred: Sequence[str], sample_id: Optional[str] = None) -> np.ndarray:
        """The asynchronous core logic; defaults to the synchronous matrix."""
        return self._matrix(gold, pred, sample_id)

    def matrix(self, gold: Sequence[str], pred: Sequence[str], sample_id: Optional[str] = None) -> np.ndarray:
        """Public method for synchronous matrix scoring with error handling."""
        try:
            return self._checked(self._matrix(gold, pred, sample_id), gold, pred)
        except ProviderError:
            raise
        except Exception as e:
            raise ProviderError(f"Error while running provider {self.name} on sample {sample_id}: {e}") from e

    async def amatrix(self, gold: Sequence[str], pred: Sequence[str], sample_id: Optional[str] = None) -> np.ndarray:
        """Public method for asynchronous matrix scoring with error handling."""
        try:
            return self._checked(await self._amatrix(gold, pred, sample_id), gold, pred)
        except ProviderError:
            raise
        except Exception as e:
            raise ProviderError(f"Error while running provider {self.name} on sample {sample_id}: {e}") from e

    @staticmethod
    def _checked(values: np.ndarray, gold: Sequence[str], pred: Sequence[str]) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64).reshape(len(gold), len(pred))
        return np.clip(values, 0.0, 1.0)

    async def aclose(self) -> None:
        """Release network resources, if any."""

    def describe(self) -> dict[str, Any]:
        return {"name": self.name, "supports_concurrency": self.supports_concurrency}
