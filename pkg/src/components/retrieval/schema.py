from typing import List, NamedTuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..state.schema import EnvState, InternalState, MemoryEntry


class ScorePair(NamedTuple):
    s_env: float
    s_int: float


class RetrievalQuery(BaseModel):
    model_config = ConfigDict(frozen=True)

    query_env: EnvState
    query_internal: InternalState
    k: int = Field(ge=1)
    tau: float = Field(ge=0.0, le=1.0)


class RetrievalResult(BaseModel):
    """Retrieved entry ids; the order is the contract"""

    model_config = ConfigDict(frozen=True)

    indices: List[int] = Field(default_factory=list)
    scores: List[ScorePair] = Field(default_factory=list)

    @model_validator(mode="after")
    def _aligned_and_distinct(self):
        if len(self.indices) != len(self.scores):
            raise ValueError("indices and scores must be aligned")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("retrieved indices must be distinct")
        return self

    def __len__(self) -> int:
        return len(self.indices)


class RetrievedExemplar(BaseModel):
    model_config = ConfigDict(frozen=True)

    entry: MemoryEntry
    s_env: float
    s_int: float
