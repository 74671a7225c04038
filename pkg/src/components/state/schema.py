from enum import Enum
from typing import Annotated, FrozenSet, List, Optional

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, field_serializer, field_validator

from .tokens import canonicalize_token


FeatureToken = Annotated[str, AfterValidator(canonicalize_token)]


class ActionKind(str, Enum):
    CLICK = "click"
    TYPE = "type"
    NAVIGATE = "navigate"
    SUBMIT = "submit"
    SELECT = "select"
    SCROLL = "scroll"


class EnvState(BaseModel):
    """Observed environment as a set of canonical feature tokens"""

    model_config = ConfigDict(frozen=True)

    features: FrozenSet[FeatureToken] = frozenset()

    @property
    def length(self) -> int:
        return len(self.features)

    def sorted_features(self) -> List[str]:
        return sorted(self.features)

    @field_serializer("features")
    def _serialize_features(self, features: FrozenSet[str]) -> List[str]:
        return sorted(features)


class InternalState(BaseModel):
    """The agent's objective and progress at one moment"""

    model_config = ConfigDict(frozen=True)

    directive: str
    progress_note: str = ""

    @field_validator("directive")
    @classmethod
    def _directive_not_blank(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("directive must not be empty")
        return value

    @property
    def text(self) -> str:
        if self.progress_note:
            return f"{self.directive} {self.progress_note}"
        return self.directive


class ActionRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ActionKind
    target: FeatureToken
    argument: Optional[str] = None

    def describe(self) -> str:
        text = f'{self.kind.value} "{self.target}"'
        if self.argument is not None:
            text += f" with {self.argument!r}"
        return text


class MemoryEntry(BaseModel):
    """One step of experience: state before, internal state, action, state after"""

    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    env_pre: EnvState
    internal: InternalState
    action: ActionRecord
    env_post: EnvState
    episode_success: bool
    created_at: int = Field(ge=0)  # seconds, UTC
