from pydantic import BaseModel, ConfigDict, StrictBool, StrictInt
from typing import List

from src.components.state.schema import EnvState, InternalState, MemoryEntry
from .action import ActionPayload


class MemoryEntryRecord(BaseModel):
    """One line of the memory file"""

    model_config = ConfigDict(extra="forbid")

    id: StrictInt
    env_pre: List[str]
    directive: str
    progress: str
    action: ActionPayload
    env_post: List[str]
    success: StrictBool
    ts: StrictInt

    @classmethod
    def from_entry(cls, entry: MemoryEntry) -> "MemoryEntryRecord":
        return cls(
            id=entry.id,
            env_pre=entry.env_pre.sorted_features(),
            directive=entry.internal.directive,
            progress=entry.internal.progress_note,
            action=ActionPayload.from_action(entry.action),
            env_post=entry.env_post.sorted_features(),
            success=entry.episode_success,
            ts=entry.created_at,
        )

    def to_entry(self) -> MemoryEntry:
        return MemoryEntry(
            id=self.id,
            env_pre=EnvState(features=frozenset(self.env_pre)),
            internal=InternalState(directive=self.directive, progress_note=self.progress),
            action=self.action.to_action(),
            env_post=EnvState(features=frozenset(self.env_post)),
            episode_success=self.success,
            created_at=self.ts,
        )
