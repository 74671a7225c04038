from abc import ABC, abstractmethod
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field

from src.core.config import settings

from ..state.schema import InternalState
from .config import EmbedderConfig


Score = float
EmbeddingVector = npt.NDArray[np.float64]


class EmbedderKind(str, Enum):
    AUTO = "auto"
    REFERENCE = "reference"
    REMOTE = "remote"


class EmbedderSettings(BaseModel):
    kind: EmbedderKind = EmbedderKind.AUTO
    endpoint: Optional[str] = None
    dim: int = Field(default=EmbedderConfig.DEFAULT_DIM, ge=1)
    fallback: bool = settings.EMBED_FALLBACK


class EmbedRequest(BaseModel):
    texts: List[str]


class EmbedResponse(BaseModel):
    embeddings: List[List[float]]


class Embedder(ABC):
    """Internal state embedding function f"""

    dim: int

    @abstractmethod
    def embed_texts(self, texts: Sequence[str]) -> List[EmbeddingVector]:
        """One vector of length `dim` per text, in order"""

    def embed(self, state: InternalState) -> EmbeddingVector:
        return self.embed_texts([state.text])[0]

    def embed_batch(self, states: Sequence[InternalState]) -> List[EmbeddingVector]:
        return self.embed_texts([state.text for state in states])
