from typing import Literal, Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

LogFormat = Literal["pretty", "json"]


class MiniKindSettings(BaseSettings):
    """Environment overrides, read from MINIKIND_* variables."""

    model_config = SettingsConfigDict(env_prefix="MINIKIND_")

    solver: str = "z3"
    solver_config: Optional[str] = None
    log_format: LogFormat = "pretty"
    full_schedules: bool = False
