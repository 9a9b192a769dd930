# core/cache.py

import hashlib
import json
from abc import ABC, abstractmethod
from typing import Dict, Iterable, Mapping

import numpy as np
import redis.asyncio as redis

from core.logging import get_logger

logger = get_logger(__name__)


def text_key(text: str, namespace: str = "") -> str:
    """Cache key for a label: SHA-256 of the text, optionally namespaced by model."""
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return f"{namespace}:{digest}" if namespace else digest


class BaseEmbeddingCache(ABC):
    """Abstract embedding cache API keyed by text hash."""

    @abstractmethod
    async def get_many(self, keys: Iterable[str]) -> Dict[str, np.ndarray]: ...

    @abstractmethod
    async def put_many(self, vectors: Mapping[str, np.ndarray]) -> None: ...

    async def aclose(self) -> None:
        """Release the backing connection, if any."""


class InMemoryEmbeddingCache(BaseEmbeddingCache):
    """Per-run cache held in a dictionary."""

    def __init__(self) -> None:
        self.store: Dict[str, np.ndarray] = {}

    async def get_many(self, keys: Iterable[str]) -> Dict[str, np.ndarray]:
        return {key: self.store[key] for key in keys if key in self.store}

    async def put_many(self, vectors: Mapping[str, np.ndarray]) -> None:
        self.store.update(vectors)


class RedisEmbeddingCache(BaseEmbeddingCache):
    """
    Persistent cache storing vectors as JSON lists under ``embedding:<key>``.
    Conforms to the BaseEmbeddingCache interface.
    """

    def __init__(self, redis_url: str, ttl_seconds: int | None = None):
        self.redis = redis.from_url(redis_url, decode_responses=True)
        self.key_prefix = "embedding:"
        self.ttl_seconds = ttl_seconds
        logger.info("RedisEmbeddingCache initialized. Connecting to Redis...")

    def _get_key(self, key: str) -> str:
        return f"{self.key_prefix}{key}"

    async def get_many(self, keys: Iterable[str]) -> Dict[str, np.ndarray]:
        key_list = list(keys)
        if not key_list:
            return {}
        raw_values = await self.redis.mget([self._get_key(key) for key in key_list])

        found: Dict[str, np.ndarray] = {}
        for key, raw in zip(key_list, raw_values):
            if raw is None:
                continue
            try:
                found[key] = np.asarray(json.loads(raw), dtype=np.float64)
            except (ValueError, TypeError):
                logger.warning("Skipping malformed cached embedding for key %s", key)
        return found

    async def put_many(self, vectors: Mapping[str, np.ndarray]) -> None:
        if not vectors:
            return
        async with self.redis.pipeline(transaction=False) as pipe:
            for key, vector in vectors.items():
                pipe.set(self._get_key(key), json.dumps(vector.tolist()), ex=self.ttl_seconds)
            await pipe.execute()

    async def aclose(self) -> None:
        await self.redis.aclose()
        logger.info("RedisEmbeddingCache connection closed.")
