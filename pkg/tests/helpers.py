import itertools
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from src.components.memory.schema import MemoryEntryFields, TrajectoryRecord, TrajectoryStep
from src.components.similarity.schema import Embedder
from src.components.state.schema import ActionKind, ActionRecord, EnvState, InternalState, MemoryEntry
from src.db.models.action import ActionPayload


def env(*tokens: str) -> EnvState:
    return EnvState(features=frozenset(tokens))


def click(target: str) -> ActionRecord:
    return ActionRecord(kind=ActionKind.CLICK, target=target)


def make_fields(
    env_pre: Iterable[str] = ("a",),
    directive: str = "buy shoes",
    progress: str = "",
    action: Optional[ActionRecord] = None,
    env_post: Iterable[str] = ("b",),
    success: bool = True,
) -> MemoryEntryFields:
    return MemoryEntryFields(
        env_pre=env(*env_pre),
        internal=InternalState(directive=directive, progress_note=progress),
        action=action or click("submit"),
        env_post=env(*env_post),
        episode_success=success,
    )


def make_entries(specs: Sequence[dict]) -> List[MemoryEntry]:
    """Entries with ids 0..n-1 from keyword specs for make_fields"""
    return [
        MemoryEntry(id=i, created_at=0, **make_fields(**spec).model_dump())
        for i, spec in enumerate(specs)
    ]


def make_trajectory(
    episode_id: str,
    states: Sequence[Sequence[str]],
    success: bool = True,
    directive: str = "buy shoes",
) -> TrajectoryRecord:
    """A correctly chained trajectory walking through the given observations"""
    steps = [
        TrajectoryStep(
            observation=list(before),
            progress_note=f"step {i}",
            action=ActionPayload(kind=ActionKind.CLICK, target=f"go {i}", arg=None),
            post_observation=list(after),
        )
        for i, (before, after) in enumerate(zip(states, states[1:]))
    ]
    return TrajectoryRecord(episode_id=episode_id, directive=directive, steps=steps, success=success)


class FixedClock:
    def __init__(self, start: int = 1_700_000_000):
        self._ticks = itertools.count(start)

    def __call__(self) -> int:
        return next(self._ticks)


class TableEmbedder(Embedder):
    """Embedder with hand-picked vectors, for exact internal scores in tests"""

    def __init__(self, table: Dict[str, Sequence[float]], dim: int = 2):
        self.dim = dim
        self.table = {text: np.asarray(vector, dtype=np.float64) for text, vector in table.items()}
        self.calls = 0

    def embed_texts(self, texts):
        self.calls += 1
        return [self.table.get(text, np.zeros(self.dim)) for text in texts]
