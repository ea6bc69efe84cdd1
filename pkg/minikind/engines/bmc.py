from __future__ import annotations

from typing import Set

from loguru import logger

from minikind.engines.base_engine import BaseEngine
from minikind.engines.unroller import Unroller, at
from minikind.models.engine import BmcEngineConfig
from minikind.models.message import BaseStepMessage, FalsifiedMessage
from minikind.solver import Sat, Unknown
from minikind.term import mk_not


class BmcEngine(BaseEngine[BmcEngineConfig]):
    """Bounded model checking from the initial state, one depth at a time.

    Every open property is checked at every depth in increasing order, so
    the first counterexample found for a property has minimal length.
    BaseStep(k) reports that no open property fails at any depth <= k; once
    a query comes back unknown that can no longer be claimed, and BMC only
    keeps looking for counterexamples to the remaining properties.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.undecided: Set[str] = set()

    def checkable(self):
        return [p for p in self.open_properties() if p.name not in self.undecided]

    async def run(self):
        session = await self.new_session()
        unroller = Unroller(self.ts, session)
        for k in range(self.engine_config.max_depth + 1):
            await self.checkpoint()
            if not self.checkable():
                return
            await unroller.add_step(init=k == 0)
            for prop in self.checkable():
                await self.checkpoint()
                if prop.name in self.resolved:
                    continue
                async with session.scoped():
                    await session.assert_term(mk_not(at(prop.term, k)))
                    result = await session.check(values=unroller.trace_vars(k + 1), core=False)
                if isinstance(result, Sat):
                    trace = unroller.trace(result.model, k + 1)
                    logger.info(f"{prop.name} falsified at depth {k}")
                    # no duplicate report while waiting for Resolved
                    self.resolved.add(prop.name)
                    self.publish(
                        FalsifiedMessage(engine=self.name, property_name=prop.name, trace=trace)
                    )
                elif isinstance(result, Unknown):
                    logger.warning(
                        f"{prop.name} undecided at depth {k} ({result.reason}), skipped from now on"
                    )
                    self.undecided.add(prop.name)
            if self.undecided:
                continue
            logger.info(f"base case holds through depth {k}")
            self.publish(BaseStepMessage(engine=self.name, k=k))
