"""State model component"""

from .schema import ActionKind, ActionRecord, EnvState, FeatureToken, InternalState, MemoryEntry
from .service import canonicalize_token, env_state_from_observation

__all__ = [
    "ActionKind",
    "ActionRecord",
    "EnvState",
    "FeatureToken",
    "InternalState",
    "MemoryEntry",
    "canonicalize_token",
    "env_state_from_observation",
]
