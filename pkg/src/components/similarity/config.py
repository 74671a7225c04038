from src.core.config import settings


# Reference embedder (feature hashing)
class EmbedderConfig:
    DEFAULT_DIM = settings.EMBED_DIM
    HASH_SEED = settings.EMBED_SEED
    CACHE_SIZE = 65536


# Embedding service wire protocol
class EmbeddingServiceConfig:
    SUCCESS_STATUS = 200
    TIMEOUT_SECONDS = settings.EMBED_TIMEOUT_SECONDS
    ENDPOINT_ENV_VAR = "PRAXIS_EMBED_URL"
