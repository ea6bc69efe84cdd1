from abc import ABC, abstractmethod
from typing import List

from minikind.elaboration import TransitionSystem
from minikind.engines.base_engine import BaseEngine, EngineContext
from minikind.models.engine import EngineConfig


class AbstractEngineFactory(ABC):
    @abstractmethod
    def create_engines(
        self, engine_config: EngineConfig, ts: TransitionSystem, context: EngineContext
    ) -> List[BaseEngine]:
        pass
