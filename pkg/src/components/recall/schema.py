from pydantic import BaseModel, ConfigDict, Field

from .config import RenderDefaults


class RenderConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_exemplars: int = Field(default=RenderDefaults.MAX_EXEMPLARS, ge=1)
    max_chars_per_state: int = Field(default=RenderDefaults.MAX_CHARS_PER_STATE, ge=1)
    include_failures: bool = RenderDefaults.INCLUDE_FAILURES
