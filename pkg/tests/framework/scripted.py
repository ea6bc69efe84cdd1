"""Engines that publish a fixed list of messages, for director tests."""

import asyncio
from typing import Dict, List, Optional, Tuple

from minikind.elaboration import TransitionSystem
from minikind.engines.abstract_factory import AbstractEngineFactory
from minikind.engines.base_engine import BaseEngine, EngineContext
from minikind.models.engine import EngineConfig, EngineType
from minikind.models.message import Message


class ScriptedEngine(BaseEngine[EngineConfig]):
    def __init__(self, *args, script: List[Optional[Message]], **kwargs):
        super().__init__(*args, **kwargs)
        self.script = script

    async def run(self):
        for message in self.script:
            await self.checkpoint()
            if message is None:
                # stall until cancelled
                await asyncio.Event().wait()
            self.publish(message)


class FailingEngine(BaseEngine[EngineConfig]):
    async def run(self):
        raise RuntimeError("solver went away")


class ScriptedFactory(AbstractEngineFactory):
    """One engine per config type; a script of None raises inside the engine."""

    def __init__(self, scripts: Dict[EngineType, Tuple[str, Optional[List[Optional[Message]]]]]):
        self.scripts = scripts

    def create_engines(
        self, engine_config: EngineConfig, ts: TransitionSystem, context: EngineContext
    ) -> List[BaseEngine]:
        name, script = self.scripts[EngineType(engine_config.type)]
        if script is None:
            return [FailingEngine(engine_config, ts, context, name=name)]
        return [ScriptedEngine(engine_config, ts, context, name=name, script=script)]
