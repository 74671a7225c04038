"""Exception hierarchy shared by every component"""

from typing import Optional


class PraxisError(Exception):
    """Base class for all errors raised by this package"""


class EmptyTokenError(PraxisError, ValueError):
    """A feature token was empty after canonicalization"""


class ContractViolation(PraxisError, ValueError):
    """A caller broke an operation's precondition"""


class ParameterError(PraxisError, ValueError):
    """A configuration or generation parameter is out of its documented range"""


class ConfigError(PraxisError, ValueError):
    """Invalid run configuration; `flag` names the offending CLI flag when known"""

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(message)
        self.flag = flag


# Embedding service

class EmbeddingError(PraxisError):
    """Base class for remote embedder failures"""


class EmbeddingTransportError(EmbeddingError):
    """The embedding service could not be reached or answered with a non-200 status"""


class MalformedEmbeddingResponseError(EmbeddingError):
    """The embedding service answered with a body that does not follow the wire protocol"""


class EmbeddingDimensionError(EmbeddingError):
    """The embedding service returned vectors of the wrong dimension"""


# Memory store

class StoreError(PraxisError):
    """Base class for memory store failures"""


class StoreFormatError(StoreError, ValueError):
    """A memory file line could not be decoded"""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnsupportedVersionError(StoreError):
    """The memory file header declares a version this build cannot read"""


class StorageIOError(StoreError):
    """An append could not be made durable; the store is unchanged"""


class TrajectoryFormatError(PraxisError, ValueError):
    """A trajectory input line could not be decoded"""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class TrajectoryChainError(PraxisError, ValueError):
    """A trajectory step does not start where the previous step ended"""

    def __init__(self, step_index: int, episode_id: Optional[str] = None):
        where = f" in episode {episode_id}" if episode_id else ""
        super().__init__(f"chaining violation at step {step_index}{where}")
        self.step_index = step_index
        self.episode_id = episode_id


class SiteGenerationError(PraxisError):
    """The simulator could not produce a site with reachable tasks"""
