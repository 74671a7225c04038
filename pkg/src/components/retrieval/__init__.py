"""State-dependent retrieval over the memory store"""

from .oracle import brute_force_retrieve
from .schema import RetrievalQuery, RetrievalResult, RetrievedExemplar, ScorePair
from .service import resolve_exemplars, retrieve, score_all, topk_indices

__all__ = [
    "RetrievalQuery",
    "RetrievalResult",
    "RetrievedExemplar",
    "ScorePair",
    "brute_force_retrieve",
    "resolve_exemplars",
    "retrieve",
    "score_all",
    "topk_indices",
]
