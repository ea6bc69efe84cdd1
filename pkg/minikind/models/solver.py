from typing import List, Optional

from pydantic.v1 import validator

from .model import BaseModel

DEFAULT_LOGIC = "QF_LIRA"
DEFAULT_QUERY_TIMEOUT_MS = 30_000


class SolverConfig(BaseModel):
    name: str
    executable: str
    args: List[str] = []
    logic: str = DEFAULT_LOGIC
    supports_unsat_cores: bool = True
    timeout_ms: Optional[int] = DEFAULT_QUERY_TIMEOUT_MS

    @validator("timeout_ms")
    def positive_timeout(cls, value):
        if value is not None and value <= 0:
            raise ValueError("timeout_ms must be positive")
        return value

    @property
    def timeout_seconds(self) -> Optional[float]:
        return None if self.timeout_ms is None else self.timeout_ms / 1000

    @property
    def command(self) -> List[str]:
        return [self.executable, *self.args]
