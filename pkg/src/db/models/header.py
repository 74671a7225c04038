from pydantic import BaseModel, ConfigDict, StrictInt

from ..config import StoreFormat


class StoreHeader(BaseModel):
    """First line of every memory file"""

    model_config = ConfigDict(extra="forbid")

    praxis_version: StrictInt = StoreFormat.VERSION
