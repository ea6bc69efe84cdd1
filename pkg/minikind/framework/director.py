from __future__ import annotations

import asyncio
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set

from loguru import logger

from minikind import engine_name, property_name
from minikind.advice import save_advice
from minikind.elaboration import TransitionSystem
from minikind.engines.abstract_factory import AbstractEngineFactory
from minikind.engines.base_engine import BaseEngine, EngineContext
from minikind.engines.default_factory import DefaultEngineFactory
from minikind.errors import ConfigError, MiniKindError
from minikind.framework.bus import MessageBus
from minikind.models.engine import (
    EngineType,
    InvariantGenerationEngineConfig,
    PdrEngineConfig,
    RunConfig,
)
from minikind.models.message import (
    BaseStepMessage,
    DoneMessage,
    FalsifiedMessage,
    InductiveOnlyMessage,
    InvariantsMessage,
    Message,
    ResolvedMessage,
    ValidMessage,
)
from minikind.models.result import PropertyResult, RunReport, RunStats, Trace, Verdict
from minikind.postprocessing import compute_ivc, smooth
from minikind.solver import SolverSession, SolverStats
from minikind.term import Term, free_vars
from minikind.utils.worker import QueueConsumer

DIRECTOR = "director"

UNKNOWN_TIMEOUT = "timeout"
UNKNOWN_NO_BASE = "no-base-engine"
UNKNOWN_BASE_PENDING = "base-case-pending"
UNKNOWN_EXHAUSTED = "exhausted"


@dataclass
class _Held:
    engine: str
    trace: Trace


class Director:
    """Runs the enabled engines and decides one verdict per property.

    The first Valid or Falsified accepted for a property wins. An
    InductiveOnly claim becomes Valid once BMC has reported a BaseStep deep
    enough to cover its base case. Engines learn about accepted verdicts
    through Resolved messages, which only the director publishes.
    """

    def __init__(
        self,
        ts: TransitionSystem,
        config: RunConfig,
        factory: Optional[AbstractEngineFactory] = None,
        advice: Sequence[Term] = (),
        model: str = "",
    ):
        self.ts = ts
        self.config = config
        self.factory = factory or DefaultEngineFactory()
        self.advice = list(advice)
        self.model = model
        self.bus = MessageBus()
        self.inbox: QueueConsumer[Message] = QueueConsumer()
        self.stats = SolverStats()
        self.engines: List[BaseEngine] = []
        self.results: Dict[str, PropertyResult] = {}
        self.gated: Dict[str, InductiveOnlyMessage] = {}
        self.held: Dict[str, _Held] = {}
        self.done: Set[str] = set()
        self.diagnostics: Dict[str, str] = {}
        self.base_step = -1
        self.timed_out = False
        self._started = time.monotonic()

    # setup

    def _validate(self):
        if not self.ts.properties:
            raise ConfigError("the model declares no properties")
        if not self.config.engines:
            raise ConfigError("no engines are enabled")

    def _create_engines(self) -> List[BaseEngine]:
        engine_configs = list(self.config.engines)
        if self.advice and not self.config.has(EngineType.INVARIANT_GENERATION):
            engine_configs.append(InvariantGenerationEngineConfig(templates=False))
        pdr = self.config.engine(EngineType.PDR)
        slots = None
        if isinstance(pdr, PdrEngineConfig) and pdr.max_concurrency:
            slots = asyncio.Semaphore(pdr.max_concurrency)
        context = EngineContext(
            bus=self.bus,
            solver=self.config.solver,
            stats=self.stats,
            transcript_dir=self.config.dump_smt_dir,
            schedule_seed=self.config.schedule_seed,
            max_schedule_delay_ms=self.config.max_schedule_delay_ms,
            pdr_slots=slots,
            advice=self.advice,
        )
        engines: List[BaseEngine] = []
        for engine_config in engine_configs:
            engines.extend(self.factory.create_engines(engine_config, self.ts, context))
        context.invariant_producers = {
            engine.name
            for engine in engines
            if EngineType(engine.engine_config.type)
            in (EngineType.INVARIANT_GENERATION, EngineType.PDR)
        }
        if self.advice:
            context.advice_checkers = {
                engine.name
                for engine in engines
                if EngineType(engine.engine_config.type) is EngineType.INVARIANT_GENERATION
            }
        return engines

    def engine_type(self, name: str) -> Optional[EngineType]:
        for engine in self.engines:
            if engine.name == name:
                return EngineType(engine.engine_config.type)
        return None

    @property
    def bmc_running(self) -> bool:
        return any(
            self.engine_type(engine.name) is EngineType.BMC and engine.name not in self.done
            for engine in self.engines
        )

    # run

    async def run(self) -> RunReport:
        engine_name.set(DIRECTOR)
        self._validate()
        self._started = time.monotonic()
        self.bus.subscribe(self.inbox)
        self.engines = self._create_engines()
        for engine in self.engines:
            self.bus.subscribe(engine, engine.subscriptions)
        for engine in self.engines:
            engine.start()
        logger.info(f"started {len(self.engines)} engines for {len(self.ts.properties)} properties")
        try:
            await self._collect()
        finally:
            await asyncio.gather(*(engine.wait_terminated() for engine in self.engines))
        self._release_held()
        self._settle_unknowns()
        await self._post_process()
        if self.config.write_advice:
            save_advice(self.config.write_advice, self._advice_invariants(), self.ts)
        return self._report()

    def _finished(self) -> bool:
        if len(self.results) == len(self.ts.properties):
            return True
        return len(self.done) == len(self.engines) and self.inbox.input_queue.empty()

    async def _collect(self):
        deadline = self._started + self.config.timeout_seconds
        while not self._finished():
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                self.timed_out = True
                break
            try:
                message = await asyncio.wait_for(self.inbox.input_queue.get(), remaining)
            except asyncio.TimeoutError:
                self.timed_out = True
                break
            self.handle_message(message)
        if self.timed_out:
            logger.warning(f"global timeout of {self.config.timeout_seconds}s reached")

    def handle_message(self, message: Message):
        if isinstance(message, BaseStepMessage):
            self._on_base_step(message)
        elif isinstance(message, InductiveOnlyMessage):
            self._on_inductive(message)
        elif isinstance(message, ValidMessage):
            self.resolve(
                message.property_name,
                Verdict.VALID,
                message.engine,
                k=message.k,
                invariants=message.invariants,
            )
        elif isinstance(message, FalsifiedMessage):
            self._on_falsified(message)
        elif isinstance(message, DoneMessage):
            self.done.add(message.engine)
            if message.diagnostic:
                self.diagnostics[message.engine] = message.diagnostic
                logger.error(f"engine {message.engine} stopped: {message.diagnostic}")
            if not self.bmc_running:
                self._release_held()

    def _on_base_step(self, message: BaseStepMessage):
        self.base_step = max(self.base_step, message.k)
        for claim in list(self.gated.values()):
            if self.base_step >= claim.k - 1:
                self._accept_inductive(claim)
        for name, held in list(self.held.items()):
            if self.base_step >= held.trace.length - 2:
                self.resolve(name, Verdict.FALSIFIED, held.engine, trace=held.trace)

    def _on_inductive(self, message: InductiveOnlyMessage):
        name = message.property_name
        if name in self.results:
            return
        if self.base_step >= message.k - 1:
            self._accept_inductive(message)
            return
        claim = self.gated.get(name)
        if claim is None or message.k < claim.k:
            self.gated[name] = message

    def _accept_inductive(self, claim: InductiveOnlyMessage):
        self.resolve(
            claim.property_name,
            Verdict.VALID,
            claim.engine,
            k=claim.k,
            invariants=claim.invariants,
        )

    def _on_falsified(self, message: FalsifiedMessage):
        name = message.property_name
        if name in self.results:
            return
        trace = message.trace
        hold = (
            self.config.minimal_cex
            and self.engine_type(message.engine) is EngineType.PDR
            and self.bmc_running
            and self.base_step < trace.length - 2
        )
        if hold:
            logger.info(f"holding {name} trace of length {trace.length} until BMC catches up")
            self.held.setdefault(name, _Held(message.engine, trace))
            return
        self.resolve(name, Verdict.FALSIFIED, message.engine, trace=trace)

    def _release_held(self):
        for name, held in list(self.held.items()):
            self.resolve(name, Verdict.FALSIFIED, held.engine, trace=held.trace)

    def resolve(
        self,
        name: str,
        verdict: Verdict,
        engine: str,
        k: Optional[int] = None,
        invariants: Sequence[Term] = (),
        trace: Optional[Trace] = None,
        reason: Optional[str] = None,
    ):
        if name in self.results:
            return
        self.gated.pop(name, None)
        self.held.pop(name, None)
        self.results[name] = PropertyResult(
            name=name,
            verdict=verdict,
            engine=engine,
            k=k,
            invariants=list(invariants),
            trace=trace,
            reason=reason,
            wall_time=time.monotonic() - self._started,
        )
        logger.info(f"{name}: {verdict.value} ({engine})")
        if verdict is Verdict.UNKNOWN:
            return
        self.bus.publish(ResolvedMessage(engine=DIRECTOR, property_name=name, verdict=verdict))
        term = self.ts.property(name).term
        if verdict is Verdict.VALID and not any(var.prev for var in free_vars(term)):
            self.bus.publish(InvariantsMessage(engine=DIRECTOR, invariants=[term]))

    def _settle_unknowns(self):
        for prop in self.ts.properties:
            if prop.name in self.results:
                continue
            if self.timed_out:
                reason = UNKNOWN_TIMEOUT
            elif prop.name in self.gated:
                bmc = self.config.has(EngineType.BMC)
                reason = UNKNOWN_BASE_PENDING if bmc else UNKNOWN_NO_BASE
            else:
                reason = UNKNOWN_EXHAUSTED
            self.resolve(prop.name, Verdict.UNKNOWN, DIRECTOR, reason=reason)

    # after the engines stop

    async def _post_process(self):
        jobs = []
        for result in self.results.values():
            if self.config.ivc and result.verdict is Verdict.VALID:
                jobs.append(self._ivc(result))
            if self.config.smooth and result.verdict is Verdict.FALSIFIED:
                jobs.append(self._smooth(result))
        if jobs:
            await asyncio.gather(*jobs)

    async def _with_session(self, job: str, name: str, work):
        with engine_name.scoped(job), property_name.scoped(name):
            return await self._run_job(job, name, work)

    async def _run_job(self, job: str, name: str, work):
        session = SolverSession(
            self.config.solver,
            name=f"{job}:{name}",
            transcript_dir=self.config.dump_smt_dir,
            stats=self.stats,
            engine=job,
        )
        try:
            await session.start()
            return await asyncio.wait_for(work(session), self.config.timeout_seconds)
        except (MiniKindError, asyncio.TimeoutError) as e:
            logger.warning(f"{job} for {name} failed: {e!r}")
            return None
        finally:
            await session.close()

    async def _ivc(self, result: PropertyResult):
        k = result.k or 1
        if result.engine and self.engine_type(result.engine) is EngineType.PDR:
            # frame clauses with the property are 1-inductive
            k = 1

        async def work(session):
            return await compute_ivc(self.ts, result.name, k, result.invariants, session)

        ivc = await self._with_session("ivc", result.name, work)
        if ivc is not None:
            result.ivc = ivc

    async def _smooth(self, result: PropertyResult):
        assert result.trace is not None
        trace = result.trace

        async def work(session):
            return await smooth(self.ts, result.name, trace, session)

        smoothed = await self._with_session("smooth", result.name, work)
        if smoothed is not None:
            result.smoothed_trace = smoothed

    def _advice_invariants(self) -> List[Term]:
        if not self.config.ivc:
            return list(self.bus.invariants)
        reduced: List[Term] = []
        for result in self.results.values():
            if result.ivc is not None:
                reduced.extend(result.ivc.reduced_invariants)
            elif result.verdict is Verdict.VALID:
                reduced.extend(result.invariants)
        return reduced

    def _report(self) -> RunReport:
        order = {prop.name: i for i, prop in enumerate(self.ts.properties)}
        results = sorted(self.results.values(), key=lambda r: order[r.name])
        stats = RunStats(
            check_sat_calls=self.stats.total,
            per_engine=dict(sorted(self.stats.per_engine.items())),
            wall_time=time.monotonic() - self._started,
        )
        return RunReport(
            model=self.model,
            results=results,
            stats=stats,
            unused_inputs=list(self.ts.unused_inputs),
            diagnostics=dict(sorted(self.diagnostics.items())),
        )


async def run(
    ts: TransitionSystem,
    config: RunConfig,
    factory: Optional[AbstractEngineFactory] = None,
    advice: Sequence[Term] = (),
    model: str = "",
) -> RunReport:
    return await Director(ts, config, factory=factory, advice=advice, model=model).run()
