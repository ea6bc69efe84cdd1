from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Awaitable, Callable, FrozenSet, List, Optional, Sequence, Tuple, Union

from loguru import logger

from minikind import property_name
from minikind.elaboration import Property, TransitionSystem
from minikind.engines.base_engine import BaseEngine
from minikind.engines.unroller import Unroller, at
from minikind.models.engine import DEFAULT_MAX_FRAMES, PdrEngineConfig
from minikind.models.message import FalsifiedMessage, InvariantsMessage, ValidMessage
from minikind.models.result import Trace
from minikind.solver import CheckResult, Sat, SolverSession, Unknown, Unsat
from minikind.term import (
    App,
    Op,
    Sort,
    Term,
    Value,
    free_vars,
    mk_and,
    mk_const,
    mk_eq,
    mk_ge,
    mk_le,
    mk_not,
    mk_or,
    mk_var,
    step_name,
)

# conjunction of literals over unindexed state variables
Cube = Tuple[Term, ...]


@dataclass(order=True)
class Obligation:
    level: int
    index: int
    cube: Cube = field(compare=False)
    # the obligation this cube is a predecessor of, toward the bad state
    successor: Optional["Obligation"] = field(default=None, compare=False)

    def chain(self) -> List[Cube]:
        cubes: List[Cube] = []
        current: Optional[Obligation] = self
        while current is not None:
            cubes.append(current.cube)
            current = current.successor
        return cubes


@dataclass(frozen=True)
class PdrValid:
    k: int
    invariants: List[Term]


@dataclass(frozen=True)
class PdrFalsified:
    trace: Trace


@dataclass(frozen=True)
class PdrUnknown:
    reason: str


PdrOutcome = Union[PdrValid, PdrFalsified, PdrUnknown]


class _Undecided(Exception):
    pass


def clause_of(cube: Cube) -> Term:
    return mk_or(*(mk_not(literal) for literal in cube))


async def _no_checkpoint():
    return None


class Pdr:
    """IC3 over one property, run directly on the theory.

    Frames are kept as delta clause sets: level i holds the clauses that
    were propagated up to exactly i, and F_i is every clause at a level
    >= i. F_0 is the initial states. Queries use two persistent steps, the
    current state at step 0 and its successor at step 1.
    """

    def __init__(
        self,
        ts: TransitionSystem,
        prop: Property,
        session: SolverSession,
        max_frames: int = DEFAULT_MAX_FRAMES,
        checkpoint: Callable[[], Awaitable[None]] = _no_checkpoint,
    ):
        self.ts = ts
        self.prop = prop
        self.session = session
        self.max_frames = max_frames
        self.checkpoint = checkpoint
        self.unroller = Unroller(ts, session)
        self.deltas: List[List[Cube]] = [[], []]
        self.obligations = 0
        self.state = [(name, sort) for name, sort in ts.vars]

    @property
    def depth(self) -> int:
        return len(self.deltas) - 1

    def frame(self, level: int) -> List[Cube]:
        return [cube for deltas in self.deltas[max(level, 1) :] for cube in deltas]

    def state_vars(self, step: int):
        return self.unroller.step_vars(step, include_generated=True)

    def cube_from_model(self, model, step: int) -> Cube:
        literals: List[Term] = []
        for name, sort in self.state:
            value: Value = model[step_name(name, step)]
            var = mk_var(name, sort)
            if sort is Sort.BOOL:
                literals.append(var if value else mk_not(var))
            else:
                literals.append(mk_eq(var, mk_const(value, sort)))
        return tuple(literals)

    # queries

    async def query(
        self,
        level: int,
        extra: Sequence[Term],
        assumptions: Sequence[Tuple[str, Term]] = (),
        values=(),
    ) -> CheckResult:
        """F_level at step 0, plus extra assertions, under the persistent transition."""
        await self.checkpoint()
        async with self.session.scoped():
            if level == 0:
                await self.session.assert_term(self.unroller.init_at(0))
            else:
                for cube in self.frame(level):
                    await self.session.assert_term(at(clause_of(cube), 0))
            for term in extra:
                await self.session.assert_term(term)
            result = await self.session.check(
                assumptions=assumptions, values=values, core=bool(assumptions)
            )
        if isinstance(result, Unknown):
            raise _Undecided(result.reason)
        return result

    async def intersects_init(self, cube: Cube) -> bool:
        flag = mk_var(self.ts.init_flag, Sort.BOOL)
        if mk_not(flag) in cube:
            return False
        result = await self.query(0, [at(literal, 0) for literal in cube])
        return isinstance(result, Sat)

    async def relative_induction(self, cube: Cube, level: int, values=()) -> CheckResult:
        """F_(level-1) and not cube and T and cube' (cube' literals labelled)."""
        assumptions = [(f"lit{i}", at(literal, 1)) for i, literal in enumerate(cube)]
        if not self.session.config.supports_unsat_cores:
            extra = [at(mk_not(mk_and(*cube)), 0)] + [literal for _, literal in assumptions]
            return await self.query(level - 1, extra, values=values)
        return await self.query(
            level - 1, [at(mk_not(mk_and(*cube)), 0)], assumptions=assumptions, values=values
        )

    async def is_unsat_relative(self, cube: Cube, level: int) -> bool:
        extra = [at(mk_not(mk_and(*cube)), 0), at(mk_and(*cube), 1)]
        return isinstance(await self.query(level - 1, extra), Unsat)

    async def excluded_by_frame(self, cube: Cube, level: int) -> bool:
        result = await self.query(level, [at(literal, 0) for literal in cube])
        return isinstance(result, Unsat)

    # generalization

    async def generalize_cube(
        self, cube: Cube, level: int, core: Optional[FrozenSet[str]] = None
    ) -> Cube:
        """Shrink a cube blocked relative to F_(level-1).

        Literals outside the unsat core go first, then single literals are
        dropped one at a time, then numeric equalities are weakened to
        bounds. Every candidate stays disjoint from the initial states.
        """
        reduced = list(cube)
        if core is not None:
            reduced = [literal for i, literal in enumerate(cube) if f"lit{i}" in core]
            if await self.intersects_init(tuple(reduced)):
                reduced = await self.restore_init_disjointness(cube, reduced)

        for literal in list(reduced):
            if len(reduced) == 1:
                break
            candidate = tuple(other for other in reduced if other != literal)
            if await self.intersects_init(candidate):
                continue
            if await self.is_unsat_relative(candidate, level):
                reduced = list(candidate)

        for position, literal in enumerate(list(reduced)):
            if not (isinstance(literal, App) and literal.op is Op.EQ):
                continue
            var, value = literal.args
            if not var.sort.is_numeric:
                continue
            for bound in (mk_ge(var, value), mk_le(var, value)):
                candidate = tuple(reduced[:position] + [bound] + reduced[position + 1 :])
                if await self.intersects_init(candidate):
                    continue
                if await self.is_unsat_relative(candidate, level):
                    reduced = list(candidate)
                    break
        return tuple(reduced)

    async def restore_init_disjointness(self, cube: Cube, reduced: List[Term]) -> List[Term]:
        flag = mk_not(mk_var(self.ts.init_flag, Sort.BOOL))
        order = sorted(cube, key=lambda literal: literal != flag)
        for literal in order:
            if literal in reduced:
                continue
            reduced = [other for other in cube if other in reduced or other == literal]
            if not await self.intersects_init(tuple(reduced)):
                return reduced
        return list(cube)

    def add_blocked(self, cube: Cube, level: int):
        literals = set(cube)
        for deltas in self.deltas[1 : level + 1]:
            deltas[:] = [old for old in deltas if not literals <= set(old)]
        self.deltas[level].append(cube)

    # main loop

    def obligation(self, level: int, cube: Cube, successor: Optional[Obligation]) -> Obligation:
        self.obligations += 1
        return Obligation(level, self.obligations, cube, successor)

    async def block(self, cube: Cube, level: int) -> Optional[Obligation]:
        """Block a bad cube at level; returns the start of a counterexample chain if it fails."""
        queue = [self.obligation(level, cube, None)]
        while queue:
            ob = heapq.heappop(queue)
            if ob.level == 0 or await self.intersects_init(ob.cube):
                return ob
            if await self.excluded_by_frame(ob.cube, ob.level):
                continue
            values = self.state_vars(0)
            result = await self.relative_induction(ob.cube, ob.level, values=values)
            if isinstance(result, Unsat):
                core = result.core if self.session.config.supports_unsat_cores else None
                generalized = await self.generalize_cube(ob.cube, ob.level, core)
                self.add_blocked(generalized, ob.level)
                if ob.level < self.depth:
                    heapq.heappush(queue, self.obligation(ob.level + 1, ob.cube, ob.successor))
            else:
                assert isinstance(result, Sat)
                predecessor = self.cube_from_model(result.model, 0)
                heapq.heappush(queue, self.obligation(ob.level - 1, predecessor, ob))
                heapq.heappush(queue, ob)
        return None

    async def propagate(self) -> Optional[int]:
        """Push clauses forward; returns a level whose delta emptied."""
        for level in range(1, self.depth):
            for cube in list(self.deltas[level]):
                result = await self.query(level, [at(mk_and(*cube), 1)])
                if isinstance(result, Unsat):
                    self.deltas[level].remove(cube)
                    self.deltas[level + 1].append(cube)
            if not self.deltas[level]:
                return level
        return None

    async def concretize(self, start: Obligation) -> Trace:
        """Replay an obligation chain as an initialized unrolling."""
        chain = start.chain()
        length = len(chain) + 1
        async with self.session.scoped():
            await self.session.assert_term(self.unroller.init_at(0))
            for step in range(2, length):
                for term in self.unroller.transition_at(step):
                    await self.session.assert_term(term)
                await self.session.assert_term(self.unroller.init_literal(step, False))
            for step, cube in enumerate(chain):
                for literal in cube:
                    await self.session.assert_term(at(literal, step))
            await self.session.assert_term(mk_not(at(self.prop.term, length - 1)))
            result = await self.session.check(values=self.unroller.trace_vars(length), core=False)
        if not isinstance(result, Sat):
            raise _Undecided("counterexample chain did not replay")
        return self.unroller.trace(result.model, length)

    def certificate(self, level: int) -> List[Term]:
        clauses = [clause_of(cube) for cube in self.frame(level)]
        if not any(var.prev for var in free_vars(self.prop.term)):
            clauses.append(self.prop.term)
        return clauses

    async def run(self) -> PdrOutcome:
        try:
            return await self._run()
        except _Undecided as e:
            return PdrUnknown(str(e))

    async def _run(self) -> PdrOutcome:
        await self.unroller.add_step(init=None)
        await self.unroller.add_step(init=False)
        bad_now = mk_not(at(self.prop.term, 0))
        result = await self.query(0, [bad_now], values=self.unroller.trace_vars(1))
        if isinstance(result, Sat):
            return PdrFalsified(self.unroller.trace(result.model, 1))

        bad_next = mk_not(at(self.prop.term, 1))
        while True:
            while True:
                result = await self.query(self.depth, [bad_next], values=self.state_vars(0))
                if isinstance(result, Unsat):
                    break
                assert isinstance(result, Sat)
                start = await self.block(self.cube_from_model(result.model, 0), self.depth)
                if start is not None:
                    return PdrFalsified(await self.concretize(start))
            if self.depth >= self.max_frames:
                return PdrUnknown(f"no fixpoint within {self.max_frames} frames")
            self.deltas.append([])
            logger.debug(f"{self.prop.name}: frame {self.depth}")
            level = await self.propagate()
            if level is not None:
                return PdrValid(level, self.certificate(level))


async def pdr_run(
    ts: TransitionSystem,
    prop: Property,
    session: SolverSession,
    max_frames: int = DEFAULT_MAX_FRAMES,
) -> PdrOutcome:
    return await Pdr(ts, prop, session, max_frames).run()


class PdrEngine(BaseEngine[PdrEngineConfig]):
    """PDR sub-engine for a single property; consumes no foreign invariants."""

    def __init__(self, *args, prop: Property, **kwargs):
        super().__init__(*args, **kwargs)
        self.prop = prop

    async def run(self):
        property_name.set(self.prop.name)
        slots = self.context.pdr_slots
        if slots is None:
            await self.solve()
            return
        async with slots:
            await self.solve()

    async def solve(self):
        await self.checkpoint()
        if self.prop.name in self.resolved:
            return
        session = await self.new_session()
        pdr = Pdr(
            self.ts.with_properties([self.prop.name]),
            self.prop,
            session,
            self.engine_config.max_frames,
            checkpoint=self.stop_when_resolved,
        )
        outcome = await pdr.run()
        if isinstance(outcome, PdrValid):
            logger.info(f"{self.prop.name} valid, fixpoint at frame {outcome.k}")
            self.publish(InvariantsMessage(engine=self.name, invariants=outcome.invariants))
            self.publish(
                ValidMessage(
                    engine=self.name,
                    property_name=self.prop.name,
                    k=outcome.k,
                    invariants=outcome.invariants,
                )
            )
        elif isinstance(outcome, PdrFalsified):
            logger.info(f"{self.prop.name} falsified, trace length {outcome.trace.length}")
            self.publish(
                FalsifiedMessage(
                    engine=self.name, property_name=self.prop.name, trace=outcome.trace
                )
            )
        else:
            logger.info(f"{self.prop.name} undecided: {outcome.reason}")

    async def stop_when_resolved(self):
        await self.checkpoint()
        if self.prop.name in self.resolved:
            raise _Undecided("resolved elsewhere")
