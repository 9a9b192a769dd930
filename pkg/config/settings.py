# config/settings.py

import logging
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings, read from WORFEVAL_* environment variables and .env."""

    model_config = SettingsConfigDict(
        env_prefix="WORFEVAL_", env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    # Sentence-embedding service (OpenAI-compatible /embeddings endpoint)
    EMBED_ENDPOINT: Optional[str] = None
    EMBED_API_KEY: str = "EMPTY"
    EMBED_MODEL: str = "sentence-transformers/all-mpnet-base-v2"
    EMBED_TIMEOUT: float = 30.0
    EMBED_MAX_RETRIES: int = 2
    EMBED_BATCH_SIZE: int = 64

    # Redis URL for a persistent embedding cache; in-memory cache when unset
    EMBED_CACHE_URL: Optional[str] = None

    # Scoring defaults
    BETA: float = 0.6
    TOPO_CAP: int = 20
    PROVIDER: str = "token_cosine"
    WORKERS: int = 1

    # Logging params
    LOG_LEVEL: int = logging.INFO
    LOG_FILE: str = "logs/worfeval.log"
    LOG_ROTATION_SIZE: int = 10 * 1024 * 1024
    LOG_BACKUP_COUNT: int = 5


# Create a single instance of settings for the entire application
settings = Settings()
