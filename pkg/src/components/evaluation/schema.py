from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..retrieval.config import RetrievalConfig
from ..sim.config import SiteDefaults
from ..sim.schema import PolicyConfig
from .config import GridDefaults


class Arm(str, Enum):
    BASE = "base"
    MEMORY = "memory"
    OPTIMAL = "optimal"


class ResultsMatrix(BaseModel):
    """Outcomes of a task x repetition grid; rows follow `tasks`"""

    model_config = ConfigDict(frozen=True)

    tasks: List[str] = Field(default_factory=list)
    reps: int = Field(ge=1)
    success: List[List[bool]] = Field(default_factory=list)
    steps: List[List[int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _rectangular(self):
        if len(self.success) != len(self.tasks) or len(self.steps) != len(self.tasks):
            raise ValueError("one success row and one steps row per task")
        for row in (*self.success, *self.steps):
            if len(row) != self.reps:
                raise ValueError(f"every row needs {self.reps} cells")
        if any(count < 0 for row in self.steps for count in row):
            raise ValueError("step counts must be non-negative")
        return self

    @property
    def is_empty(self) -> bool:
        return not self.tasks


class GridConfig(BaseModel):
    """Everything one experiment needs besides the embedder"""

    model_config = ConfigDict(frozen=True)

    seed: int = GridDefaults.SEED
    nodes: int = SiteDefaults.NODES
    branching: int = SiteDefaults.BRANCHING
    tasks: int = SiteDefaults.TASKS
    loop_traps: int = Field(default=SiteDefaults.LOOP_TRAPS, ge=0)
    penalty_pages: int = Field(default=SiteDefaults.PENALTY_PAGES, ge=0)
    reps: int = Field(default=GridDefaults.REPS, ge=1)
    replicates: int = Field(default=GridDefaults.REPLICATES, ge=1)
    policy: PolicyConfig = Field(default_factory=PolicyConfig)
    k: int = Field(default=RetrievalConfig.DEFAULT_K, ge=0)
    tau: float = Field(default=RetrievalConfig.DEFAULT_TAU, ge=0.0, le=1.0)


class ArmSummary(BaseModel):
    arm: str
    replicate: int
    accuracy: float
    best_of_n: float
    reliability: Optional[float] = None
    avg_steps: Optional[float] = None


class ExperimentResult(BaseModel):
    """Per-arm matrices, one per replicate in replicate order"""

    seed: int
    task_ids: List[str]
    matrices: Dict[str, List[ResultsMatrix]] = Field(default_factory=dict)


class AblationCurve(BaseModel):
    k_values: List[int]
    accuracy: List[float]
    seeds: int = Field(ge=1)
    replicate_accuracy: List[List[float]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _aligned(self):
        if len(self.accuracy) != len(self.k_values):
            raise ValueError("accuracy must align with k_values")
        if self.replicate_accuracy and len(self.replicate_accuracy) != len(self.k_values):
            raise ValueError("replicate_accuracy must align with k_values")
        return self
