"""Procedural memory retrieval.

Every entry is scored against the query, the k best environment scores are kept,
those are reordered by internal score (descending, smaller id first on ties) and
finally entries whose environment score is below tau are dropped. The threshold is
applied after the top-k cut, so an entry above tau can still be excluded when it
falls outside the environment top-k.
"""

import heapq
import logging
from typing import Dict, Iterable, List, Sequence, Tuple

from src.core.exceptions import ContractViolation

from ..similarity.schema import Embedder
from ..similarity.service import env_score, inner_product
from ..state.schema import InternalState, MemoryEntry
from .schema import RetrievalQuery, RetrievalResult, RetrievedExemplar, ScorePair

logger = logging.getLogger(__name__)


def score_all(
    entries: Sequence[MemoryEntry],
    query: RetrievalQuery,
    embedder: Embedder,
) -> List[ScorePair]:
    """One (s_env, s_int) pair per entry, positionally aligned"""
    if not entries:
        return []

    distinct: List[InternalState] = list(dict.fromkeys(entry.internal for entry in entries))
    vectors = embedder.embed_batch([query.query_internal, *distinct])
    query_vector = vectors[0]
    internal_scores: Dict[InternalState, float] = {
        state: inner_product(vector, query_vector)
        for state, vector in zip(distinct, vectors[1:])
    }

    query_env = query.query_env
    return [
        ScorePair(env_score(entry.env_pre, query_env), internal_scores[entry.internal])
        for entry in entries
    ]


def topk_indices(scores: Sequence[float], k: int) -> List[int]:
    """Positions of the k largest scores, smaller position first on ties"""
    if k < 1:
        raise ContractViolation(f"k must be at least 1, got {k}")
    return heapq.nsmallest(k, range(len(scores)), key=lambda i: (-scores[i], i))


def retrieve(
    store: Iterable[MemoryEntry],
    query: RetrievalQuery,
    embedder: Embedder,
) -> RetrievalResult:
    entries: Tuple[MemoryEntry, ...] = tuple(store)
    scores = score_all(entries, query, embedder)

    top = topk_indices([pair.s_env for pair in scores], query.k)
    ranked = sorted(top, key=lambda i: (-scores[i].s_int, entries[i].id))
    kept = [i for i in ranked if scores[i].s_env >= query.tau]

    logger.debug("Retrieved %d of %d entries (k=%d, tau=%s)", len(kept), len(entries), query.k, query.tau)
    return RetrievalResult(
        indices=[entries[i].id for i in kept],
        scores=[scores[i] for i in kept],
    )


def resolve_exemplars(
    store: Iterable[MemoryEntry],
    result: RetrievalResult,
) -> List[RetrievedExemplar]:
    """Join a result back to its entries, keeping the result order"""
    entries = store if isinstance(store, (list, tuple)) else tuple(store)
    exemplars = []
    lookup = None
    for entry_id, pair in zip(result.indices, result.scores):
        if 0 <= entry_id < len(entries) and entries[entry_id].id == entry_id:
            entry = entries[entry_id]
        else:
            if lookup is None:
                lookup = {entry.id: entry for entry in entries}
            entry = lookup[entry_id]
        exemplars.append(RetrievedExemplar(entry=entry, s_env=pair.s_env, s_int=pair.s_int))
    return exemplars
