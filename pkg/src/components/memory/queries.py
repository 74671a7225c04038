from collections import Counter
from typing import Iterable

from ..state.schema import MemoryEntry
from .schema import StoreStats


def store_statistics(entries: Iterable[MemoryEntry]) -> StoreStats:
    """Summary counts for the inspect command"""
    snapshot = tuple(entries)
    successes = sum(1 for entry in snapshot if entry.episode_success)
    kinds = Counter(entry.action.kind.value for entry in snapshot)
    return StoreStats(
        entries=len(snapshot),
        next_id=len(snapshot),
        successes=successes,
        failures=len(snapshot) - successes,
        distinct_directives=len({entry.internal.directive for entry in snapshot}),
        action_kinds=dict(sorted(kinds.items())),
    )
