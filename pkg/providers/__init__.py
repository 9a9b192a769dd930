# providers/__init__.py

from typing import Optional

from config.settings import settings
from core.base_provider import BaseSimilarityProvider
from core.cache import BaseEmbeddingCache, InMemoryEmbeddingCache, RedisEmbeddingCache
from core.errors import ProviderError
from core.registry import register_provider

from .embedding import EmbeddingServiceClient, EmbeddingServiceProvider
from .lexical import ExactMatchProvider, TokenCosineProvider
from .precomputed import EmbeddingVectorsProvider, PrecomputedMatrixProvider

# ==============================================================================
# SIMILARITY PROVIDER REGISTRATION
# ==============================================================================

# 1. Offline, deterministic providers
register_provider("exact", lambda **_: ExactMatchProvider())
register_provider("token_cosine", lambda **_: TokenCosineProvider())


# 2. File-backed providers
def precomputed_matrix_factory(path: Optional[str] = None, **_) -> BaseSimilarityProvider:
    """Factory for the similarity-matrix file provider (--sim-file)."""
    if not path:
        raise ProviderError("The precomputed_matrix provider needs a similarity file (--sim-file)")
    return PrecomputedMatrixProvider.from_file(path)


register_provider("precomputed_matrix", precomputed_matrix_factory)


def embedding_vectors_factory(path: Optional[str] = None, **_) -> BaseSimilarityProvider:
    """Factory for the label-embedding file provider (--embed-file)."""
    if not path:
        raise ProviderError("The embedding_vectors provider needs an embedding file (--embed-file)")
    return EmbeddingVectorsProvider.from_file(path)


register_provider("embedding_vectors", embedding_vectors_factory)


# 3. Remote sentence encoder
def build_embedding_cache() -> BaseEmbeddingCache:
    if settings.EMBED_CACHE_URL:
        return RedisEmbeddingCache(redis_url=settings.EMBED_CACHE_URL)
    return InMemoryEmbeddingCache()


def embedding_service_factory(
    endpoint: Optional[str] = None, cache: Optional[BaseEmbeddingCache] = None, **_
) -> BaseSimilarityProvider:
    """
    Factory for the embedding-service provider.
    WORFEVAL_EMBED_ENDPOINT takes precedence over the endpoint passed in.
    """
    client = EmbeddingServiceClient(
        endpoint=settings.EMBED_ENDPOINT or endpoint,
        cache=cache if cache is not None else build_embedding_cache(),
    )
    return EmbeddingServiceProvider(client)


register_provider("embedding_service", embedding_service_factory)
