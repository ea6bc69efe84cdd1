from pathlib import Path
from typing import List, Optional

from minikind.elaboration import TransitionSystem, elaborate
from minikind.frontend import load_program, parse_source, typecheck
from minikind.models.engine import (
    BmcEngineConfig,
    EngineConfig,
    InvariantGenerationEngineConfig,
    KInductionEngineConfig,
    PdrEngineConfig,
    RunConfig,
)
from minikind.models.settings import MiniKindSettings
from minikind.models.solver import SolverConfig
from minikind.solver import get_solver_config

CORPUS_DIR = Path(__file__).parent / "corpus"

CTR = """node main(reset: bool) returns (x: int);
var ok1, ok2: bool;
let
  x = if reset then 0 else (0 -> pre x + 1);
  ok1 = x >= 0;
  ok2 = x < 3;
  --%PROPERTY ok1;
  --%PROPERTY ok2;
tel
"""


def corpus_names() -> List[str]:
    return sorted(path.stem for path in CORPUS_DIR.glob("*.lus"))


def load_corpus(name: str) -> TransitionSystem:
    return elaborate(load_program(CORPUS_DIR / f"{name}.lus"))


def ts_from_source(source: str, file: str = "test.lus") -> TransitionSystem:
    return elaborate(typecheck(parse_source(source, file)))


def configured_solver() -> SolverConfig:
    settings = MiniKindSettings()
    return get_solver_config(settings.solver, settings.solver_config)


def default_engines(
    bmc: bool = True, kind: bool = True, invgen: bool = True, pdr: bool = True, max_depth: int = 30
) -> List[EngineConfig]:
    engines: List[EngineConfig] = []
    if bmc:
        engines.append(BmcEngineConfig(max_depth=max_depth))
    if kind:
        engines.append(KInductionEngineConfig())
    if invgen:
        engines.append(InvariantGenerationEngineConfig())
    if pdr:
        engines.append(PdrEngineConfig())
    return engines


def run_config(engines: Optional[List[EngineConfig]] = None, **kwargs) -> RunConfig:
    kwargs.setdefault("timeout_seconds", 60)
    return RunConfig(
        engines=default_engines() if engines is None else engines,
        solver=configured_solver(),
        **kwargs,
    )
