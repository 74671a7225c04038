from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field, StrictBool

from src.db.models.action import ActionPayload

from ..state.schema import ActionRecord, EnvState, InternalState


class TrajectoryStep(BaseModel):
    model_config = ConfigDict(extra="forbid")

    observation: List[str]
    progress_note: str = ""
    action: ActionPayload
    post_observation: List[str]


class TrajectoryRecord(BaseModel):
    """One episode as recorded by an agent or a demonstrator"""

    model_config = ConfigDict(extra="forbid")

    episode_id: str
    directive: str
    steps: List[TrajectoryStep] = Field(min_length=1)
    success: StrictBool


class MemoryEntryFields(BaseModel):
    """Everything an entry carries except the id and timestamp the store assigns"""

    model_config = ConfigDict(frozen=True)

    env_pre: EnvState
    internal: InternalState
    action: ActionRecord
    env_post: EnvState
    episode_success: bool


class SkippedEpisode(BaseModel):
    episode_id: str
    reason: str


class IngestReport(BaseModel):
    entries_added: int = 0
    episodes_ingested: int = 0
    entry_ids: List[int] = Field(default_factory=list)
    skipped: List[SkippedEpisode] = Field(default_factory=list)


class StoreStats(BaseModel):
    entries: int
    next_id: int
    successes: int
    failures: int
    distinct_directives: int
    action_kinds: Dict[str, int] = Field(default_factory=dict)
