"""Scoring kernels and embedders for procedural memory retrieval"""

import logging
import os
import threading
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import mmh3
import numpy as np

from src.core.config import settings
from src.core.exceptions import ContractViolation, EmbeddingError

from ..state.schema import EnvState, InternalState
from .config import EmbedderConfig, EmbeddingServiceConfig
from .schema import Embedder, EmbedderKind, EmbedderSettings, EmbeddingVector, Score

logger = logging.getLogger(__name__)


def iou(a: EnvState, b: EnvState) -> Score:
    """Intersection over union of two feature sets; two empty states score 1.0"""
    inter = len(a.features & b.features)
    union = a.length + b.length - inter
    if union == 0:
        return 1.0
    return inter / union


def length_overlap(lm: int, lq: int) -> Score:
    """1 - |lm - lq| / max(lm, lq), with 1.0 when both lengths are zero"""
    if lm < 0 or lq < 0:
        raise ContractViolation(f"lengths must be non-negative, got {lm} and {lq}")
    longest = max(lm, lq)
    if longest == 0:
        return 1.0
    return 1.0 - abs(lm - lq) / longest


def env_score(mem_env: EnvState, query_env: EnvState) -> Score:
    return iou(mem_env, query_env) * length_overlap(mem_env.length, query_env.length)


def inner_product(a: EmbeddingVector, b: EmbeddingVector) -> Score:
    if a.shape != b.shape:
        raise ContractViolation(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.dot(a, b))


def token_bucket(
    token: str,
    dim: int = EmbedderConfig.DEFAULT_DIM,
    seed: int = EmbedderConfig.HASH_SEED,
) -> Tuple[int, float]:
    """Bucket and sign a token hashes to; low bits pick the bucket, the top bit the sign"""
    h = mmh3.hash64(token, seed=seed, signed=False)[0]
    sign = -1.0 if (h >> 63) & 1 else 1.0
    return h % dim, sign


@lru_cache(maxsize=EmbedderConfig.CACHE_SIZE)
def _hashed_vector(text: str, dim: int, seed: int) -> EmbeddingVector:
    vector = np.zeros(dim, dtype=np.float64)
    for token in text.casefold().split():
        bucket, sign = token_bucket(token, dim, seed)
        vector[bucket] += sign
    norm = np.linalg.norm(vector)
    if norm > 0:
        vector /= norm
    vector.flags.writeable = False
    return vector


def embed_text(
    text: str,
    dim: int = EmbedderConfig.DEFAULT_DIM,
    seed: int = EmbedderConfig.HASH_SEED,
) -> EmbeddingVector:
    """Feature-hashing bag of tokens, L2-normalized; empty text gives the zero vector"""
    return _hashed_vector(text, dim, seed)


def reference_embed(
    state: InternalState,
    dim: int = EmbedderConfig.DEFAULT_DIM,
    seed: int = EmbedderConfig.HASH_SEED,
) -> EmbeddingVector:
    return embed_text(state.text, dim, seed)


class ReferenceEmbedder(Embedder):
    """Deterministic built-in embedder"""

    def __init__(self, dim: int = EmbedderConfig.DEFAULT_DIM, seed: int = EmbedderConfig.HASH_SEED):
        if dim < 1:
            raise ContractViolation(f"embedding dimension must be positive, got {dim}")
        self.dim = dim
        self.seed = seed

    def embed_texts(self, texts: Sequence[str]) -> List[EmbeddingVector]:
        return [embed_text(text, self.dim, self.seed) for text in texts]


class FallbackEmbedder(Embedder):
    """Remote embedder that switches to the reference embedder on its first failure.

    After the switch every vector comes from the reference embedder, so a run
    never compares vectors from two different spaces.
    """

    def __init__(self, remote: Embedder, reference: ReferenceEmbedder):
        if remote.dim != reference.dim:
            raise ContractViolation("remote and reference embedders must share a dimension")
        self.dim = remote.dim
        self.remote = remote
        self.reference = reference
        self._use_reference = False
        self._lock = threading.Lock()

    @property
    def degraded(self) -> bool:
        return self._use_reference

    def embed_texts(self, texts: Sequence[str]) -> List[EmbeddingVector]:
        if not self._use_reference:
            try:
                return self.remote.embed_texts(texts)
            except EmbeddingError as e:
                with self._lock:
                    if not self._use_reference:
                        logger.warning("Remote embedder failed (%s); using reference embedder", e)
                        self._use_reference = True
                        clear = getattr(self.remote, "clear_cache", None)
                        if clear:
                            clear()
        return self.reference.embed_texts(texts)


def resolve_endpoint(config: EmbedderSettings) -> Optional[str]:
    """Config endpoint first, then the environment variable, then settings"""
    return (
        config.endpoint
        or os.environ.get(EmbeddingServiceConfig.ENDPOINT_ENV_VAR)
        or settings.PRAXIS_EMBED_URL
    )


def build_embedder(config: Optional[EmbedderSettings] = None) -> Embedder:
    from .client import RemoteEmbedder

    config = config or EmbedderSettings()
    reference = ReferenceEmbedder(dim=config.dim)
    if config.kind == EmbedderKind.REFERENCE:
        return reference

    endpoint = resolve_endpoint(config)
    if not endpoint:
        if config.kind == EmbedderKind.REMOTE:
            raise ContractViolation("remote embedder selected but no endpoint configured")
        return reference

    remote = RemoteEmbedder(endpoint=endpoint, dim=config.dim)
    logger.info("Using remote embedder at %s", endpoint)
    if config.fallback:
        return FallbackEmbedder(remote, reference)
    return remote
