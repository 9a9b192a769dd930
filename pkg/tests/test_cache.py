# tests/test_cache.py

from unittest.mock import AsyncMock

import fakeredis.aioredis
import numpy as np
import pytest

from core.cache import InMemoryEmbeddingCache, RedisEmbeddingCache, text_key

pytestmark = pytest.mark.asyncio


@pytest.fixture
def redis_cache() -> RedisEmbeddingCache:
    """
    RedisEmbeddingCache whose client is swapped for an in-memory fake.
    The URL doesn't matter since the client is overridden.
    """
    cache = RedisEmbeddingCache(redis_url="redis://localhost:6379/fake")
    cache.redis = fakeredis.aioredis.FakeRedis(decode_responses=True)
    return cache


async def test_text_key_is_namespaced_and_stable():
    assert text_key("go to fridge") == text_key("go to fridge")
    assert text_key("go to fridge", "model-a") != text_key("go to fridge", "model-b")
    assert text_key("go to fridge", "model-a").startswith("model-a:")


async def test_in_memory_cache():
    cache = InMemoryEmbeddingCache()
    await cache.put_many({"k1": np.array([1.0, 0.0])})

    found = await cache.get_many(["k1", "k2"])

    assert list(found) == ["k1"]
    assert found["k1"].tolist() == [1.0, 0.0]


async def test_redis_cache_round_trip(redis_cache: RedisEmbeddingCache):
    await redis_cache.put_many({"k1": np.array([0.6, 0.8]), "k2": np.array([0.0, 1.0])})

    found = await redis_cache.get_many(["k2", "missing", "k1"])

    assert set(found) == {"k1", "k2"}
    assert found["k1"].tolist() == [0.6, 0.8]
    assert await redis_cache.redis.exists("embedding:k1") == 1


async def test_redis_cache_empty_requests(redis_cache: RedisEmbeddingCache):
    await redis_cache.put_many({})
    assert await redis_cache.get_many([]) == {}


async def test_redis_cache_skips_malformed_entries(redis_cache: RedisEmbeddingCache):
    await redis_cache.redis.set("embedding:broken", "not a vector")
    assert await redis_cache.get_many(["broken"]) == {}


async def test_redis_cache_ttl(redis_cache: RedisEmbeddingCache):
    redis_cache.ttl_seconds = 60
    await redis_cache.put_many({"k1": np.array([1.0])})
    assert 0 < await redis_cache.redis.ttl("embedding:k1") <= 60


async def test_in_memory_cache_aclose_keeps_entries():
    cache = InMemoryEmbeddingCache()
    await cache.put_many({"k1": np.array([1.0])})
    await cache.aclose()
    assert list(await cache.get_many(["k1"])) == ["k1"]


async def test_redis_cache_aclose_closes_the_connection(mocker, redis_cache: RedisEmbeddingCache):
    close = mocker.patch.object(redis_cache.redis, "aclose", new=AsyncMock())
    await redis_cache.put_many({"k1": np.array([1.0])})

    await redis_cache.aclose()

    close.assert_awaited_once()
