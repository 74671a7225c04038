import logging
import threading
from typing import Dict, List, Optional, Sequence

import httpx
import numpy as np
from pydantic import ValidationError

from src.core.exceptions import (
    ContractViolation,
    EmbeddingDimensionError,
    EmbeddingTransportError,
    MalformedEmbeddingResponseError,
)

from .config import EmbedderConfig, EmbeddingServiceConfig
from .schema import Embedder, EmbeddingVector, EmbedRequest, EmbedResponse

logger = logging.getLogger(__name__)


class RemoteEmbedder(Embedder):
    """Client for an embedding service speaking `{"texts": [...]}` -> `{"embeddings": [[...]]}`.

    Vectors are cached per text. The cache is lock-protected and httpx clients are
    thread-safe, so concurrent batch calls are allowed.
    """

    def __init__(
        self,
        endpoint: str,
        dim: int = EmbedderConfig.DEFAULT_DIM,
        timeout: float = EmbeddingServiceConfig.TIMEOUT_SECONDS,
        client: Optional[httpx.Client] = None,
    ):
        self.endpoint = endpoint
        self.dim = dim
        self._client = client or httpx.Client(timeout=timeout)
        self._cache: Dict[str, EmbeddingVector] = {}
        self._lock = threading.Lock()

    def close(self) -> None:
        self._client.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def clear_cache(self) -> None:
        with self._lock:
            self._cache.clear()

    def embed_texts(self, texts: Sequence[str]) -> List[EmbeddingVector]:
        if not texts:
            raise ContractViolation("embedding batch must not be empty")

        with self._lock:
            missing = [text for text in dict.fromkeys(texts) if text not in self._cache]

        if missing:
            vectors = self.request_batch(missing)
            with self._lock:
                self._cache.update(zip(missing, vectors))

        with self._lock:
            return [self._cache[text] for text in texts]

    def request_batch(self, texts: Sequence[str]) -> List[EmbeddingVector]:
        """POST one batch to the service and return renormalized vectors"""
        if not texts:
            raise ContractViolation("embedding batch must not be empty")

        payload = EmbedRequest(texts=list(texts)).model_dump()
        try:
            response = self._client.post(self.endpoint, json=payload)
        except httpx.HTTPError as e:
            raise EmbeddingTransportError(f"embedding request to {self.endpoint} failed: {e}") from e

        if response.status_code != EmbeddingServiceConfig.SUCCESS_STATUS:
            raise EmbeddingTransportError(
                f"embedding service returned HTTP {response.status_code}"
            )

        try:
            body = EmbedResponse.model_validate(response.json())
        except (ValueError, ValidationError) as e:
            raise MalformedEmbeddingResponseError(f"invalid embedding response: {e}") from e

        if len(body.embeddings) != len(texts):
            raise MalformedEmbeddingResponseError(
                f"expected {len(texts)} embeddings, got {len(body.embeddings)}"
            )

        vectors = []
        for raw in body.embeddings:
            if len(raw) != self.dim:
                raise EmbeddingDimensionError(f"expected dimension {self.dim}, got {len(raw)}")
            vector = np.asarray(raw, dtype=np.float64)
            norm = np.linalg.norm(vector)
            if norm > 0:
                vector = vector / norm
            vector.flags.writeable = False
            vectors.append(vector)

        logger.debug("Embedded %d texts remotely", len(vectors))
        return vectors


def remote_embed_batch(
    texts: Sequence[str],
    endpoint: str,
    dim: int = EmbedderConfig.DEFAULT_DIM,
    client: Optional[httpx.Client] = None,
) -> List[EmbeddingVector]:
    """One-shot batch call without caching"""
    embedder = RemoteEmbedder(endpoint=endpoint, dim=dim, client=client)
    try:
        return embedder.request_batch(texts)
    finally:
        if client is None:
            embedder.close()
