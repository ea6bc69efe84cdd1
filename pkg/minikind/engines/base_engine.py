from __future__ import annotations

import asyncio
import random
from dataclasses import dataclass, field
from typing import Generic, List, Optional, Set, Tuple, TypeVar

from loguru import logger

from minikind import engine_name
from minikind.elaboration import Property, TransitionSystem
from minikind.framework.bus import MessageBus
from minikind.models.engine import EngineConfig
from minikind.models.message import DoneMessage, Message, MessageType, ResolvedMessage
from minikind.models.solver import SolverConfig
from minikind.solver import SolverSession, SolverStats
from minikind.term import Term
from minikind.utils.worker import AsyncWorker

EngineConfigType = TypeVar("EngineConfigType", bound=EngineConfig)


class Schedule:
    """Seeded random pauses between solver queries."""

    def __init__(self, seed: int, max_delay_ms: int, name: str):
        self.random = random.Random(f"{seed}:{name}")
        self.max_delay_ms = max_delay_ms

    def next_delay(self) -> float:
        if self.max_delay_ms <= 0:
            return 0.0
        return self.random.uniform(0, self.max_delay_ms) / 1000.0


@dataclass
class EngineContext:
    bus: MessageBus
    solver: SolverConfig
    stats: SolverStats
    transcript_dir: Optional[str] = None
    schedule_seed: Optional[int] = None
    max_schedule_delay_ms: int = 0
    # names of engines whose output can strengthen k-induction
    invariant_producers: Set[str] = field(default_factory=set)
    pdr_slots: Optional[asyncio.Semaphore] = None
    # candidates loaded from an advice file
    advice: List[Term] = field(default_factory=list)
    # engines that check the advice before anything else
    advice_checkers: Set[str] = field(default_factory=set)


class BaseEngine(AsyncWorker[Message], Generic[EngineConfigType]):
    """One verification engine running as its own task.

    Messages from the bus queue up until the engine reaches a checkpoint,
    which happens between solver queries. Whatever happens inside `run`, the
    engine ends by publishing Done.
    """

    subscriptions: Tuple[MessageType, ...] = (MessageType.RESOLVED,)

    def __init__(
        self,
        engine_config: EngineConfigType,
        ts: TransitionSystem,
        context: EngineContext,
        name: str,
    ):
        super().__init__()
        self.engine_config = engine_config
        self.ts = ts
        self.context = context
        self.name = name
        self.resolved: Set[str] = set()
        self.sessions: List[SolverSession] = []
        self.schedule = (
            Schedule(context.schedule_seed, context.max_schedule_delay_ms, name)
            if context.schedule_seed is not None
            else None
        )

    @property
    def task_name(self) -> str:
        return f"engine:{self.name}"

    @property
    def bus(self) -> MessageBus:
        return self.context.bus

    def publish(self, message: Message):
        self.bus.publish(message)

    def open_properties(self) -> List[Property]:
        return [p for p in self.ts.properties if p.name not in self.resolved]

    async def new_session(self, suffix: str = "") -> SolverSession:
        session = SolverSession(
            self.context.solver,
            name=self.name + suffix,
            transcript_dir=self.context.transcript_dir,
            stats=self.context.stats,
            engine=self.name,
        )
        self.sessions.append(session)
        await session.start()
        return session

    def handle_message(self, message: Message):
        if isinstance(message, ResolvedMessage):
            self.resolved.add(message.property_name)

    def absorb_messages(self):
        for message in self.drain_nonblocking():
            self.handle_message(message)

    async def checkpoint(self):
        """Yield to the event loop and apply pending messages."""
        delay = self.schedule.next_delay() if self.schedule is not None else 0.0
        await asyncio.sleep(delay)
        self.absorb_messages()

    async def _run_loop(self):
        engine_name.set(self.name)
        diagnostic: Optional[str] = None
        logger.info(f"engine {self.name} started")
        try:
            await self.run()
        except asyncio.CancelledError:
            logger.debug(f"engine {self.name} cancelled")
            raise
        except Exception as e:
            logger.exception(f"engine {self.name} failed")
            diagnostic = f"{type(e).__name__}: {e}"
        finally:
            for session in self.sessions:
                await asyncio.shield(session.close())
        logger.info(f"engine {self.name} done")
        self.publish(DoneMessage(engine=self.name, diagnostic=diagnostic))

    async def run(self):
        raise NotImplementedError
