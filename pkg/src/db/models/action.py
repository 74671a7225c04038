from pydantic import BaseModel, ConfigDict
from typing import Optional

from src.components.state.schema import ActionKind, ActionRecord


class ActionPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: ActionKind
    target: str
    arg: Optional[str]

    @classmethod
    def from_action(cls, action: ActionRecord) -> "ActionPayload":
        return cls(kind=action.kind, target=action.target, arg=action.argument)

    def to_action(self) -> ActionRecord:
        return ActionRecord(kind=self.kind, target=self.target, argument=self.arg)
