# tests/test_providers.py

import json
import math
from pathlib import Path
from types import SimpleNamespace
from unittest.mock import AsyncMock

import httpx
import numpy as np
import pytest
from openai import APIError

import providers
from config.settings import settings
from core.cache import InMemoryEmbeddingCache
from core.errors import ProviderError, ServiceError
from core.registry import get_provider, resolve_provider_name
from providers.embedding import EmbeddingServiceClient, EmbeddingServiceProvider
from providers.lexical import ExactMatchProvider, TokenCosineProvider
from providers.precomputed import EmbeddingVectorsProvider, PrecomputedMatrixProvider

VECTORS = {"go to fridge": [1.0, 0.0], "open fridge": [0.6, 0.8], "take mug": [0.0, 2.0]}


def make_response(texts):
    return SimpleNamespace(
        data=[SimpleNamespace(index=i, embedding=VECTORS[text]) for i, text in reversed(list(enumerate(texts)))]
    )


@pytest.fixture
def mock_embeddings_create(mocker):
    """Fixture that mocks the OpenAI-compatible embeddings endpoint."""

    async def fake_create(model, input):
        return make_response(input)

    mock_create = AsyncMock(side_effect=fake_create)
    # Patch the class in the module where it is used
    mock_client_class = mocker.patch("providers.embedding.AsyncOpenAI")
    mock_client_class.return_value.embeddings.create = mock_create
    mock_client_class.return_value.close = AsyncMock()
    return mock_create


# --- lexical providers ---


def test_exact_match():
    provider = ExactMatchProvider()
    assert provider.similarity("go to fridge", "go to fridge") == 1.0
    assert provider.similarity("go to fridge", "Go to fridge") == 0.0


def test_token_cosine():
    provider = TokenCosineProvider()
    assert provider.similarity("go to fridge", "Go to fridge 1") == pytest.approx(3 / math.sqrt(12))
    assert provider.similarity("go to fridge", "take mug") == 0.0
    assert provider.similarity("", "take mug") == 0.0


@pytest.mark.parametrize("label", ["go to fridge", " ", "\t"])
def test_token_cosine_scores_identical_labels_one(label):
    assert TokenCosineProvider().similarity(label, label) == 1.0


def test_token_cosine_differing_blank_labels_score_zero():
    assert TokenCosineProvider().similarity(" ", "\t") == 0.0


def test_provider_matrix_has_gold_rows():
    values = TokenCosineProvider().matrix(["a b", "c"], ["a", "c", "d"])
    assert values.shape == (2, 3)
    assert values[1, 1] == 1.0
    assert values[0, 0] == pytest.approx(1 / math.sqrt(2))


def test_registry_resolves_aliases():
    assert resolve_provider_name("token") == "token_cosine"
    assert isinstance(get_provider("token"), TokenCosineProvider)
    assert isinstance(get_provider("exact"), ExactMatchProvider)
    with pytest.raises(KeyError):
        get_provider("telepathy")


def test_file_providers_need_a_path():
    with pytest.raises(ProviderError):
        get_provider("sim-file")
    with pytest.raises(ProviderError):
        get_provider("embed-file", path=None)


# --- file-backed providers ---


def test_precomputed_matrix_provider(tmp_path: Path):
    path = tmp_path / "sim.jsonl"
    path.write_text(json.dumps({"id": "s1", "matrix": [[0.9, 0.1], [0.2, 1.2]]}) + "\n", encoding="utf-8")
    provider = get_provider("sim-file", path=str(path))

    values = provider.matrix(["a", "b"], ["x", "y"], sample_id="s1")

    assert values.tolist() == [[0.9, 0.1], [0.2, 1.0]]
    with pytest.raises(ProviderError):
        provider.matrix(["a"], ["x"], sample_id="s1")
    with pytest.raises(ProviderError):
        provider.matrix(["a", "b"], ["x", "y"], sample_id="unknown")
    with pytest.raises(ProviderError):
        provider.similarity("a", "x")


def test_precomputed_matrix_rejects_ragged_rows(tmp_path: Path):
    path = tmp_path / "sim.jsonl"
    path.write_text(json.dumps({"id": "s1", "matrix": [[0.9, 0.1], [0.2]]}) + "\n", encoding="utf-8")
    with pytest.raises(ProviderError):
        PrecomputedMatrixProvider.from_file(path)


def test_embedding_vectors_provider(tmp_path: Path):
    path = tmp_path / "vectors.jsonl"
    path.write_text(
        "".join(json.dumps({"label": label, "vector": vector}) + "\n" for label, vector in VECTORS.items()),
        encoding="utf-8",
    )
    provider = EmbeddingVectorsProvider.from_file(path)

    assert provider.similarity("go to fridge", "open fridge") == pytest.approx(0.6)
    assert provider.matrix(["go to fridge"], ["take mug", "go to fridge"])[0].tolist() == pytest.approx([0.0, 1.0])
    with pytest.raises(ProviderError):
        provider.similarity("go to fridge", "unknown label")


def test_embedding_vectors_reject_mixed_dimensions(tmp_path: Path):
    path = tmp_path / "vectors.jsonl"
    path.write_text(
        json.dumps({"label": "a", "vector": [1.0, 0.0]}) + "\n" + json.dumps({"label": "b", "vector": [1.0]}) + "\n",
        encoding="utf-8",
    )
    with pytest.raises(ProviderError):
        EmbeddingVectorsProvider.from_file(path)


def test_unreadable_provider_file(tmp_path: Path):
    with pytest.raises(ProviderError):
        PrecomputedMatrixProvider.from_file(tmp_path / "absent.jsonl")


# --- embedding service ---


def test_client_needs_an_endpoint():
    with pytest.raises(ServiceError):
        EmbeddingServiceClient(endpoint=None)


@pytest.mark.asyncio
async def test_embed_batch_normalizes_and_keeps_input_order(mock_embeddings_create: AsyncMock):
    client = EmbeddingServiceClient(endpoint="http://encoder/v1")

    vectors = await client.embed_batch(["take mug", "go to fridge", "take mug"])

    assert [vector.tolist() for vector in vectors] == [[0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]
    # duplicates are sent once
    assert mock_embeddings_create.call_args.kwargs["input"] == ["take mug", "go to fridge"]


@pytest.mark.asyncio
async def test_embed_batch_uses_the_cache(mock_embeddings_create: AsyncMock):
    cache = InMemoryEmbeddingCache()
    client = EmbeddingServiceClient(endpoint="http://encoder/v1", cache=cache)

    await client.embed_batch(["go to fridge"])
    await client.embed_batch(["go to fridge", "open fridge"])

    assert mock_embeddings_create.call_count == 2
    assert mock_embeddings_create.call_args.kwargs["input"] == ["open fridge"]
    assert len(cache.store) == 2


@pytest.mark.asyncio
async def test_embed_batch_splits_requests(mock_embeddings_create: AsyncMock):
    client = EmbeddingServiceClient(endpoint="http://encoder/v1", batch_size=2)

    await client.embed_batch(list(VECTORS))

    assert [call.kwargs["input"] for call in mock_embeddings_create.call_args_list] == [
        ["go to fridge", "open fridge"],
        ["take mug"],
    ]


@pytest.mark.asyncio
async def test_service_failure_becomes_service_error(mock_embeddings_create: AsyncMock):
    request = httpx.Request("POST", "http://encoder/v1/embeddings")
    mock_embeddings_create.side_effect = APIError("upstream unavailable", request, body=None)
    client = EmbeddingServiceClient(endpoint="http://encoder/v1")

    with pytest.raises(ServiceError):
        await client.embed_batch(["go to fridge"])


@pytest.mark.asyncio
async def test_short_response_becomes_service_error(mock_embeddings_create: AsyncMock):
    mock_embeddings_create.side_effect = None
    mock_embeddings_create.return_value = make_response(["go to fridge"])
    client = EmbeddingServiceClient(endpoint="http://encoder/v1")

    with pytest.raises(ServiceError):
        await client.embed_batch(["go to fridge", "take mug"])


@pytest.mark.asyncio
async def test_service_provider_matrix(mock_embeddings_create: AsyncMock):
    provider = EmbeddingServiceProvider(EmbeddingServiceClient(endpoint="http://encoder/v1"))

    values = await provider.amatrix(["go to fridge", "take mug"], ["open fridge"])
    await provider.aclose()

    assert values.shape == (2, 1)
    assert values[:, 0] == pytest.approx(np.array([0.6, 0.8]))


def test_service_provider_sync_calls_share_one_loop(mock_embeddings_create: AsyncMock):
    provider = EmbeddingServiceProvider(EmbeddingServiceClient(endpoint="http://encoder/v1"))

    first = provider.similarity("go to fridge", "open fridge")
    loop = provider._loop
    second = provider.matrix(["go to fridge", "take mug"], ["open fridge"])
    third = provider.similarity("take mug", "open fridge")

    assert first == pytest.approx(0.6)
    assert second[:, 0] == pytest.approx(np.array([0.6, 0.8]))
    assert third == pytest.approx(0.8)
    assert provider._loop is loop
    assert not loop.is_closed()
    assert mock_embeddings_create.call_count == 2

    provider.close()

    assert loop.is_closed()
    provider.client.client.close.assert_awaited_once()


@pytest.mark.asyncio
async def test_client_aclose_closes_the_cache(mocker, mock_embeddings_create: AsyncMock):
    cache = InMemoryEmbeddingCache()
    cache_aclose = mocker.patch.object(cache, "aclose", new=AsyncMock())
    client = EmbeddingServiceClient(endpoint="http://encoder/v1", cache=cache)

    await client.aclose()

    client.client.close.assert_awaited_once()
    cache_aclose.assert_awaited_once()


def test_env_endpoint_wins_over_flag(mocker, mock_embeddings_create: AsyncMock):
    mocker.patch.object(settings, "EMBED_ENDPOINT", "http://from-env/v1")

    provider = providers.embedding_service_factory(endpoint="http://from-flag/v1")

    assert provider.client.endpoint == "http://from-env/v1"
    assert isinstance(provider.client.cache, InMemoryEmbeddingCache)
    assert provider.supports_concurrency is False
