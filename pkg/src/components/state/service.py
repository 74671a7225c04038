import logging
from typing import Iterable

from src.core.exceptions import EmptyTokenError

from .schema import EnvState
from .tokens import canonicalize_token

logger = logging.getLogger(__name__)


def env_state_from_observation(raw_tokens: Iterable[str]) -> EnvState:
    """Canonicalize raw observation tokens into an EnvState.

    Tokens that are blank after canonicalization are skipped, so an observation
    never fails to convert; duplicates collapse through set semantics.
    """
    features = set()
    for raw in raw_tokens:
        try:
            features.add(canonicalize_token(raw))
        except EmptyTokenError:
            logger.debug("Skipping blank observation token %r", raw)
    return EnvState(features=frozenset(features))


__all__ = ["canonicalize_token", "env_state_from_observation"]
