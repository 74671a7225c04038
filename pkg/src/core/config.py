from pydantic_settings import BaseSettings
from typing import Optional


class Settings(BaseSettings):
    """Application settings"""

    # App Info
    APP_NAME: str = "PRAXIS"
    VERSION: str = "1.0.0"
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"

    # Storage
    STORE_PATH: str = "memory.jsonl"
    OUTPUT_DIR: str = "runs"

    # Embedding
    EMBED_DIM: int = 256
    EMBED_SEED: int = 0x5EED
    PRAXIS_EMBED_URL: Optional[str] = None
    EMBED_TIMEOUT_SECONDS: float = 10.0
    EMBED_FALLBACK: bool = True

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"  # Ignore extra environment variables


settings = Settings()
