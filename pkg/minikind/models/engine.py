from enum import Enum
from typing import List, Optional

from pydantic.v1 import validator

from .model import BaseModel, TypedModel
from .solver import SolverConfig

DEFAULT_BMC_DEPTH = 200
DEFAULT_MAX_K = 20
DEFAULT_INVGEN_MAX_K = 3
DEFAULT_PAIR_CAP = 2000
DEFAULT_MAX_FRAMES = 100
DEFAULT_TIMEOUT_SECONDS = 60.0


class EngineType(str, Enum):
    BASE = "engine_base"
    BMC = "engine_bmc"
    K_INDUCTION = "engine_k_induction"
    INVARIANT_GENERATION = "engine_invariant_generation"
    PDR = "engine_pdr"


class EngineConfig(TypedModel, type=EngineType.BASE.value):  # type: ignore
    pass


class BmcEngineConfig(EngineConfig, type=EngineType.BMC.value):  # type: ignore
    max_depth: int = DEFAULT_BMC_DEPTH


class KInductionEngineConfig(EngineConfig, type=EngineType.K_INDUCTION.value):  # type: ignore
    max_k: int = DEFAULT_MAX_K


class InvariantGenerationEngineConfig(
    EngineConfig, type=EngineType.INVARIANT_GENERATION.value  # type: ignore
):
    max_k: int = DEFAULT_INVGEN_MAX_K
    pair_cap: int = DEFAULT_PAIR_CAP
    # False runs only the candidates handed over from an advice file
    templates: bool = True


class PdrEngineConfig(EngineConfig, type=EngineType.PDR.value):  # type: ignore
    max_frames: int = DEFAULT_MAX_FRAMES
    max_concurrency: Optional[int] = None


class RunConfig(BaseModel):
    engines: List[EngineConfig]
    solver: SolverConfig
    timeout_seconds: float = DEFAULT_TIMEOUT_SECONDS
    ivc: bool = False
    smooth: bool = False
    minimal_cex: bool = False
    dump_smt_dir: Optional[str] = None
    schedule_seed: Optional[int] = None
    max_schedule_delay_ms: int = 0
    read_advice: Optional[str] = None
    write_advice: Optional[str] = None

    @validator("timeout_seconds")
    def positive_timeout(cls, value):
        if value <= 0:
            raise ValueError("timeout_seconds must be positive")
        return value

    def engine(self, engine_type: EngineType) -> Optional[EngineConfig]:
        for config in self.engines:
            if config.type == engine_type.value:
                return config
        return None

    def has(self, engine_type: EngineType) -> bool:
        return self.engine(engine_type) is not None
