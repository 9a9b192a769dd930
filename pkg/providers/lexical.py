# providers/lexical.py

import math

from core.base_provider import BaseSimilarityProvider


class ExactMatchProvider(BaseSimilarityProvider):
    """1.0 for identical labels, 0.0 otherwise."""

    name = "exact"
    description = "Exact string equality of the two labels."

    def _similarity(self, a: str, b: str) -> float:
        return 1.0 if a == b else 0.0


def token_set(text: str) -> frozenset:
    return frozenset(text.lower().split())


class TokenCosineProvider(BaseSimilarityProvider):
    """
    Cosine similarity of binary bags of lowercased whitespace tokens:
    |A ∩ B| / sqrt(|A| * |B|). Identical non-empty labels score 1 even without
    tokens; otherwise a label with no tokens scores 0.
    """

    name = "token_cosine"
    description = "Cosine over lowercased whitespace token sets."

    def _similarity(self, a: str, b: str) -> float:
        if a == b and a:
            return 1.0
        left, right = token_set(a), token_set(b)
        if not left or not right:
            return 0.0
        return len(left & right) / math.sqrt(len(left) * len(right))
