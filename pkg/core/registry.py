# core/registry.py

from typing import Callable, Dict

from core.base_provider import BaseSimilarityProvider

PROVIDER_REGISTRY: Dict[str, Callable[..., BaseSimilarityProvider]] = {}

# Short names accepted on the command line
PROVIDER_ALIASES: Dict[str, str] = {
    "exact": "exact",
    "token": "token_cosine",
    "sim-file": "precomputed_matrix",
    "embed-file": "embedding_vectors",
    "embed-service": "embedding_service",
}


def register_provider(name: str, factory: Callable[..., BaseSimilarityProvider]) -> None:
    """Register a similarity provider factory by name."""
    PROVIDER_REGISTRY[name] = factory


def resolve_provider_name(name: str) -> str:
    """Map a command-line alias to its registered provider name."""
    return PROVIDER_ALIASES.get(name, name)


def get_provider(name: str, **kwargs) -> BaseSimilarityProvider:
    """Instantiate a similarity provider by name or alias."""
    factory = PROVIDER_REGISTRY.get(resolve_provider_name(name))
    if factory is None:
        raise KeyError(f"Similarity provider '{name}' is not registered")
    return factory(**kwargs)
