from __future__ import annotations

from typing import List, Set

from loguru import logger

from minikind.engines.base_engine import BaseEngine
from minikind.engines.unroller import Unroller, at
from minikind.models.engine import KInductionEngineConfig
from minikind.models.message import (
    AdviceCheckedMessage,
    DoneMessage,
    InductiveOnlyMessage,
    InvariantsMessage,
    Message,
    MessageType,
)
from minikind.solver import Unknown, Unsat
from minikind.term import Term, mk_not


class KInductionEngine(BaseEngine[KInductionEngineConfig]):
    """Inductive step of k-induction over an arbitrary window of steps.

    Window step 0 leaves the init flag free, later steps pin it false.
    Invariants from the bus are asserted at every window step and never
    retracted. Base cases are left to BMC; a success is only reported as
    InductiveOnly.
    """

    subscriptions = (
        MessageType.RESOLVED,
        MessageType.INVARIANTS,
        MessageType.DONE,
        MessageType.ADVICE_CHECKED,
    )

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.invariants: List[Term] = []
        self.pending_invariants: List[Term] = []
        self.inductive: Set[str] = set()
        self.finished_engines: Set[str] = set()
        self.awaiting_advice: Set[str] = set()
        self.unroller: Unroller

    def handle_message(self, message: Message):
        super().handle_message(message)
        if isinstance(message, InvariantsMessage):
            self.pending_invariants.extend(message.invariants)
        elif isinstance(message, DoneMessage):
            self.finished_engines.add(message.engine)
            self.awaiting_advice.discard(message.engine)
        elif isinstance(message, AdviceCheckedMessage):
            self.awaiting_advice.discard(message.engine)

    def unproved(self):
        return [p for p in self.open_properties() if p.name not in self.inductive]

    def producers_alive(self) -> bool:
        return bool(self.context.invariant_producers - self.finished_engines)

    async def absorb_invariants(self) -> bool:
        """Assert pending invariants at every window step; True when any arrived."""
        if not self.pending_invariants:
            return False
        fresh, self.pending_invariants = self.pending_invariants, []
        for invariant in fresh:
            await self.unroller.assert_everywhere(invariant)
            self.invariants.append(invariant)
        logger.debug(f"asserted {len(fresh)} invariants ({len(self.invariants)} total)")
        return True

    async def run(self):
        session = await self.new_session()
        self.unroller = Unroller(self.ts, session)
        await self.unroller.add_step(init=None)
        self.awaiting_advice = set(self.context.advice_checkers) - self.finished_engines
        k = 0
        while self.unproved():
            if k >= 1 and self.awaiting_advice:
                # no deeper window until the advice batch is in
                await self.wait_for_advice()
                if self.pending_invariants:
                    await self.prove_at(k)
                continue
            if k < self.engine_config.max_k:
                k += 1
                await self.unroller.add_step(init=False)
                for invariant in self.invariants:
                    await session.assert_term(at(invariant, k))
                logger.info(f"inductive step at k={k}")
            elif not await self.wait_for_invariants():
                logger.info(f"no proof up to k={k}")
                return
            await self.prove_at(k)

    async def wait_for_advice(self):
        logger.debug(f"waiting for advice from {', '.join(sorted(self.awaiting_advice))}")
        while self.awaiting_advice and self.unproved():
            self.handle_message(await self._input_queue.get())

    async def wait_for_invariants(self) -> bool:
        while self.producers_alive() and self.unproved():
            self.handle_message(await self._input_queue.get())
            if self.pending_invariants:
                return True
        return False

    async def prove_at(self, k: int):
        session = self.unroller.session
        retry = True
        while retry:
            await self.absorb_invariants()
            for prop in self.unproved():
                await self.checkpoint()
                if prop.name in self.resolved:
                    continue
                async with session.scoped():
                    for step in range(k):
                        await session.assert_term(at(prop.term, step))
                    await session.assert_term(mk_not(at(prop.term, k)))
                    result = await session.check(core=False)
                if isinstance(result, Unsat):
                    logger.info(f"{prop.name} is {k}-inductive")
                    self.inductive.add(prop.name)
                    self.publish(
                        InductiveOnlyMessage(
                            engine=self.name,
                            property_name=prop.name,
                            k=k,
                            invariants=list(self.invariants),
                        )
                    )
                elif isinstance(result, Unknown):
                    logger.warning(f"{prop.name} undecided at k={k} ({result.reason})")
            retry = bool(self.pending_invariants) and bool(self.unproved())
