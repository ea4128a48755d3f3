from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", env_prefix="QFORGE_", extra="ignore")

    app_env: str = "dev"
    log_level: str = "WARNING"

    max_order: int = 16
    max_concurrency: int = 1
    fit_max_candidates: int = 2_000_000


@lru_cache
def get_settings() -> Settings:
    return Settings()
