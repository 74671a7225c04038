import numpy as np
import pytest

from src.components.similarity.service import ReferenceEmbedder

from .helpers import FixedClock


@pytest.fixture
def embedder() -> ReferenceEmbedder:
    return ReferenceEmbedder()


@pytest.fixture
def clock() -> FixedClock:
    return FixedClock()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def store_path(tmp_path):
    return tmp_path / "memory.jsonl"
