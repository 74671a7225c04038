"""Similarity kernels and embedders"""

from .client import RemoteEmbedder, remote_embed_batch
from .schema import Embedder, EmbedderKind, EmbedderSettings, EmbeddingVector, Score
from .service import (
    FallbackEmbedder,
    ReferenceEmbedder,
    build_embedder,
    embed_text,
    env_score,
    inner_product,
    iou,
    length_overlap,
    reference_embed,
    token_bucket,
)

__all__ = [
    "Embedder",
    "EmbedderKind",
    "EmbedderSettings",
    "EmbeddingVector",
    "FallbackEmbedder",
    "ReferenceEmbedder",
    "RemoteEmbedder",
    "Score",
    "build_embedder",
    "embed_text",
    "env_score",
    "inner_product",
    "iou",
    "length_overlap",
    "reference_embed",
    "remote_embed_batch",
    "token_bucket",
]
