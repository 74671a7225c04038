"""Brute-force retrieval used as a test oracle.

Materializes every score row and replays the three selection steps with plain
full sorts; only the scoring kernels are shared with `retrieve`.
"""

from typing import Iterable

from src.core.exceptions import ContractViolation

from ..similarity.schema import Embedder
from ..similarity.service import env_score, inner_product
from ..state.schema import MemoryEntry
from .config import OracleConfig
from .schema import RetrievalQuery, RetrievalResult, ScorePair


def brute_force_retrieve(
    store: Iterable[MemoryEntry],
    query: RetrievalQuery,
    embedder: Embedder,
) -> RetrievalResult:
    entries = list(store)
    if len(entries) > OracleConfig.MAX_ENTRIES:
        raise ContractViolation(
            f"oracle is limited to {OracleConfig.MAX_ENTRIES} entries, got {len(entries)}"
        )

    query_vector = embedder.embed(query.query_internal)
    rows = []
    for position, entry in enumerate(entries):
        rows.append({
            "position": position,
            "id": entry.id,
            "s_env": env_score(entry.env_pre, query.query_env),
            "s_int": inner_product(embedder.embed(entry.internal), query_vector),
        })

    by_env = sorted(rows, key=lambda row: (-row["s_env"], row["position"]))
    candidates = by_env[:query.k]
    by_internal = sorted(candidates, key=lambda row: (-row["s_int"], row["id"]))
    kept = [row for row in by_internal if row["s_env"] >= query.tau]

    return RetrievalResult(
        indices=[row["id"] for row in kept],
        scores=[ScorePair(row["s_env"], row["s_int"]) for row in kept],
    )
