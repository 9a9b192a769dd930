# providers/embedding.py

import asyncio
from typing import Any, Coroutine, Dict, List, Optional, Sequence, TypeVar

import httpx
import numpy as np
from openai import APIError, AsyncOpenAI

from config.settings import settings
from core.base_provider import BaseSimilarityProvider
from core.cache import BaseEmbeddingCache, InMemoryEmbeddingCache, text_key
from core.errors import ServiceError
from core.logging import get_logger

logger = get_logger(__name__)

T = TypeVar("T")


class EmbeddingServiceClient:
    """
    Client for a sentence-embedding service speaking the OpenAI-compatible
    /embeddings protocol. Vectors are unit-normalized and cached by text hash.
    """

    # The underlying AsyncOpenAI client multiplexes requests over one connection pool
    supports_concurrency: bool = True

    def __init__(
        self,
        endpoint: Optional[str],
        api_key: str = settings.EMBED_API_KEY,
        model: str = settings.EMBED_MODEL,
        timeout: float = settings.EMBED_TIMEOUT,
        max_retries: int = settings.EMBED_MAX_RETRIES,
        batch_size: int = settings.EMBED_BATCH_SIZE,
        cache: Optional[BaseEmbeddingCache] = None,
    ):
        if not endpoint:
            raise ServiceError("No embedding endpoint configured (set --embed-endpoint or WORFEVAL_EMBED_ENDPOINT)")
        if batch_size < 1:
            raise ServiceError(f"Embedding batch size must be positive, got {batch_size}")
        self.client = AsyncOpenAI(
            base_url=endpoint,
            api_key=api_key,
            timeout=httpx.Timeout(timeout),
            max_retries=max_retries,
        )
        self.endpoint = endpoint
        self.model = model
        self.batch_size = batch_size
        self.cache = cache if cache is not None else InMemoryEmbeddingCache()
        logger.info("EmbeddingServiceClient initialized for model %s at %s", self.model, self.endpoint)

    async def embed_batch(self, texts: Sequence[str]) -> List[np.ndarray]:
        """
        Embed ``texts`` (one unit vector per input, in input order).

        Raises:
            ServiceError: transport failure, non-success status, malformed
                response or vectors of differing dimension.
        """
        if not texts:
            return []
        for text in texts:
            if not isinstance(text, str) or not text:
                raise ServiceError("Embedding inputs must be non-empty strings")

        unique = list(dict.fromkeys(texts))
        keys = {text: text_key(text, self.model) for text in unique}
        vectors: Dict[str, np.ndarray] = dict(await self.cache.get_many(keys.values()))
        missing = [text for text in unique if keys[text] not in vectors]
        logger.debug("Embedding cache: %d hits, %d misses", len(unique) - len(missing), len(missing))

        fresh: Dict[str, np.ndarray] = {}
        for start in range(0, len(missing), self.batch_size):
            batch = missing[start : start + self.batch_size]
            for text, vector in zip(batch, await self._request(batch)):
                fresh[keys[text]] = vector
        if fresh:
            await self.cache.put_many(fresh)
            vectors.update(fresh)

        result = [vectors[keys[text]] for text in texts]
        dimensions = {vector.shape[0] for vector in result}
        if len(dimensions) > 1:
            raise ServiceError(f"Embedding service returned vectors of mixed dimensions {sorted(dimensions)}")
        return result

    async def _request(self, batch: List[str]) -> List[np.ndarray]:
        try:
            response = await self.client.embeddings.create(model=self.model, input=batch)
        except APIError as e:
            logger.error("Embedding service error at %s: %s", self.endpoint, e)
            raise ServiceError(f"Embedding request to {self.endpoint} failed: {e}") from e

        data = sorted(response.data, key=lambda item: item.index)
        if len(data) != len(batch):
            raise ServiceError(f"Embedding service returned {len(data)} vectors for {len(batch)} inputs")

        vectors = []
        for item in data:
            vector = np.asarray(item.embedding, dtype=np.float64)
            norm = float(np.linalg.norm(vector))
            if vector.ndim != 1 or norm == 0.0 or not np.isfinite(norm):
                raise ServiceError("Embedding service returned an unusable vector")
            vectors.append(vector / norm)
        return vectors

    async def aclose(self) -> None:
        await self.client.close()
        await self.cache.aclose()


class EmbeddingServiceProvider(BaseSimilarityProvider):
    """Cosine similarity of label embeddings fetched from an embedding service."""

    name = "embedding_service"
    description = "Cosine over sentence embeddings from a remote encoder."
    # One client per worker
    supports_concurrency = False

    def __init__(self, client: EmbeddingServiceClient):
        self.client = client
        self._loop: Optional[asyncio.AbstractEventLoop] = None

    def _run(self, coroutine: Coroutine[Any, Any, T]) -> T:
        # Synchronous calls share one private loop: the client's connection pool is bound to it.
        # Not usable from inside a running event loop.
        if self._loop is None or self._loop.is_closed():
            self._loop = asyncio.new_event_loop()
        return self._loop.run_until_complete(coroutine)

    def _similarity(self, a: str, b: str) -> float:
        left, right = self._run(self.client.embed_batch([a, b]))
        return float(left @ right)

    def _matrix(self, gold: Sequence[str], pred: Sequence[str], sample_id: Optional[str] = None) -> np.ndarray:
        return self._run(self._amatrix(gold, pred, sample_id))

    async def _amatrix(self, gold: Sequence[str], pred: Sequence[str], sample_id: Optional[str] = None) -> np.ndarray:
        if not gold or not pred:
            return np.zeros((len(gold), len(pred)), dtype=np.float64)
        vectors = await self.client.embed_batch([*gold, *pred])
        gold_vectors = np.stack(vectors[: len(gold)])
        pred_vectors = np.stack(vectors[len(gold) :])
        return gold_vectors @ pred_vectors.T

    def close(self) -> None:
        """Close the client and the private loop after synchronous use."""
        if self._loop is None or self._loop.is_closed():
            return
        try:
            self._loop.run_until_complete(self.client.aclose())
        finally:
            self._loop.close()
            self._loop = None

    async def aclose(self) -> None:
        if self._loop is not None and not self._loop.is_closed():
            await asyncio.to_thread(self.close)
            return
        await self.client.aclose()
