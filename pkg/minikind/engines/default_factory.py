from typing import Dict, List, Type

from minikind.elaboration import TransitionSystem
from minikind.engines.abstract_factory import AbstractEngineFactory
from minikind.engines.base_engine import BaseEngine, EngineContext
from minikind.engines.bmc import BmcEngine
from minikind.engines.invgen import InvariantGenerationEngine
from minikind.engines.kinduction import KInductionEngine
from minikind.engines.pdr import PdrEngine
from minikind.errors import ConfigError
from minikind.models.engine import EngineConfig, EngineType, InvariantGenerationEngineConfig

ENGINE_NAMES: Dict[EngineType, str] = {
    EngineType.BMC: "bmc",
    EngineType.K_INDUCTION: "kind",
    EngineType.INVARIANT_GENERATION: "invgen",
    EngineType.PDR: "pdr",
}

ENGINES: Dict[EngineType, Type[BaseEngine]] = {
    EngineType.BMC: BmcEngine,
    EngineType.K_INDUCTION: KInductionEngine,
    EngineType.INVARIANT_GENERATION: InvariantGenerationEngine,
}


class DefaultEngineFactory(AbstractEngineFactory):
    def create_engines(
        self, engine_config: EngineConfig, ts: TransitionSystem, context: EngineContext
    ) -> List[BaseEngine]:
        engine_type = EngineType(engine_config.type)
        if engine_type is EngineType.PDR:
            return [
                PdrEngine(engine_config, ts, context, name=f"pdr:{prop.name}", prop=prop)
                for prop in ts.properties
            ]
        if engine_type not in ENGINES:
            raise ConfigError(f"engine type {engine_type.value} is not supported")
        name = ENGINE_NAMES[engine_type]
        if isinstance(engine_config, InvariantGenerationEngineConfig) and not engine_config.templates:
            name = "advice"
        return [ENGINES[engine_type](engine_config, ts, context, name=name)]
