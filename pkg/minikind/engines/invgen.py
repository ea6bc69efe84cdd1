from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

from loguru import logger

from minikind.elaboration import TransitionSystem
from minikind.engines.base_engine import BaseEngine
from minikind.engines.unroller import Unroller, at, valuation_at
from minikind.models.engine import DEFAULT_PAIR_CAP, InvariantGenerationEngineConfig
from minikind.models.message import AdviceCheckedMessage, InvariantsMessage, MessageType
from minikind.solver import Sat, Unsat
from minikind.term import (
    Const,
    Sort,
    Term,
    Value,
    evaluate,
    iter_subterms,
    mk_and,
    mk_const,
    mk_ge,
    mk_implies,
    mk_le,
    mk_not,
    mk_var,
)


class CandidateStatus(str, Enum):
    UNKNOWN = "unknown"
    FALSIFIED = "falsified"
    PROVED = "proved"


@dataclass
class CandidateSet:
    candidates: List[Term] = field(default_factory=list)
    status: Dict[Term, CandidateStatus] = field(default_factory=dict)
    # step valuation under which a falsified candidate evaluates to false
    witnesses: Dict[Term, Dict[str, Value]] = field(default_factory=dict)

    def add(self, term: Term) -> bool:
        if term in self.status:
            return False
        self.candidates.append(term)
        self.status[term] = CandidateStatus.UNKNOWN
        return True

    def extend(self, terms: Sequence[Term]) -> List[Term]:
        return [term for term in terms if self.add(term)]

    def with_status(self, status: CandidateStatus) -> List[Term]:
        return [c for c in self.candidates if self.status[c] is status]

    def falsify(self, term: Term, witness: Dict[str, Value]):
        self.status[term] = CandidateStatus.FALSIFIED
        self.witnesses[term] = witness

    def prove(self, terms: Sequence[Term]):
        for term in terms:
            self.status[term] = CandidateStatus.PROVED

    def __len__(self) -> int:
        return len(self.candidates)


def harvest_constants(ts: TransitionSystem) -> Dict[Sort, List[Value]]:
    found: Dict[Sort, set] = {Sort.INT: set(), Sort.REAL: set()}
    for term in ts.all_terms():
        for sub in iter_subterms(term):
            if isinstance(sub, Const) and sub.sort.is_numeric:
                found[sub.sort].add(sub.value)
    found[Sort.REAL] |= {Fraction(v) for v in found[Sort.INT]}
    return {sort: sorted(values) for sort, values in found.items()}


def generate_candidates(ts: TransitionSystem, pair_cap: int = DEFAULT_PAIR_CAP) -> CandidateSet:
    """Instantiate the template menu over a transition system.

    Bool stream b gives b and not b, pairs of bool streams give implications,
    numeric variables are bounded by every constant of their sort and
    compared pairwise. Pair templates stop at `pair_cap` in name order.
    """
    sorts = ts.sorts
    bools = sorted(
        eq.lhs
        for eq in ts.equations
        if sorts[eq.lhs] is Sort.BOOL and not eq.lhs.startswith("%")
    )
    numerics = sorted(
        (name, sort) for name, sort in ts.vars if sort.is_numeric and not name.startswith("%")
    )
    constants = harvest_constants(ts)
    candidates = CandidateSet()

    for name in bools:
        var = mk_var(name, Sort.BOOL)
        candidates.extend([var, mk_not(var)])
    for left, right in _capped(permutations(bools, 2), pair_cap):
        candidates.add(mk_implies(mk_var(left, Sort.BOOL), mk_var(right, Sort.BOOL)))
    for name, sort in numerics:
        var = mk_var(name, sort)
        for value in constants[sort]:
            candidates.extend([mk_le(var, mk_const(value, sort)), mk_ge(var, mk_const(value, sort))])
    same_sort = [(a, b) for a, b in permutations(numerics, 2) if a[1] is b[1]]
    for (left, sort), (right, _) in _capped(same_sort, pair_cap):
        candidates.add(mk_le(mk_var(left, sort), mk_var(right, sort)))
    logger.debug(f"{len(candidates)} template candidates")
    return candidates


def _capped(pairs, cap: int) -> List[Tuple]:
    result = []
    for pair in pairs:
        if len(result) >= cap:
            break
        result.append(pair)
    return result


class InvariantGenerationEngine(BaseEngine[InvariantGenerationEngineConfig]):
    """Proves candidate invariants with a k-induction loop of its own.

    Advice candidates form the first batch, template candidates the second.
    A base-case model falsifies candidates for good; candidates that only
    fail the inductive step are retried at the next k.
    """

    subscriptions = (MessageType.RESOLVED,)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.candidates = CandidateSet()
        self.proved: List[Term] = []
        self.base: Unroller
        self.step: Unroller

    async def run(self):
        self.base = Unroller(self.ts, await self.new_session(".base"))
        self.step = Unroller(self.ts, await self.new_session(".step"))
        if self.context.advice:
            batch = self.candidates.extend(self.context.advice)
            logger.info(f"checking {len(batch)} advice candidates")
            await self.refine(batch)
            proved = len(self.proved)
            logger.info(f"{proved} of {len(batch)} advice candidates proved")
            self.publish(AdviceCheckedMessage(engine=self.name, proved=proved))
        if self.engine_config.templates:
            await self.checkpoint()
            if not self.open_properties():
                return
            batch = self.candidates.extend(
                generate_candidates(self.ts, self.engine_config.pair_cap).candidates
            )
            logger.info(f"checking {len(batch)} template candidates")
            await self.refine(batch)

    async def extend_step_window(self, length: int):
        start = self.step.steps
        await self.step.extend_to(length, initialized=False)
        for step in range(start, length):
            for invariant in self.proved:
                await self.step.session.assert_term(at(invariant, step))

    async def refine(self, batch: List[Term]):
        deferred = list(batch)
        for k in range(1, self.engine_config.max_k + 1):
            if not deferred or not self.open_properties():
                return
            await self.base.extend_to(k, initialized=True)
            survivors = await self.base_filter(deferred, k)
            await self.extend_step_window(k + 1)
            proved, deferred = await self.step_filter(survivors, k)
            if proved:
                self.candidates.prove(proved)
                for invariant in proved:
                    await self.step.assert_everywhere(invariant)
                self.proved.extend(proved)
                logger.info(f"proved {len(proved)} invariants at k={k}")
                self.publish(InvariantsMessage(engine=self.name, invariants=proved))

    async def base_filter(self, candidates: List[Term], k: int) -> List[Term]:
        """Drop candidates violated within the first k steps from an initial state."""
        session = self.base.session
        remaining = list(candidates)
        while remaining:
            await self.checkpoint()
            async with session.scoped():
                goal = mk_and(*(at(c, t) for t in range(k) for c in remaining))
                await session.assert_term(mk_not(goal))
                result = await session.check(
                    values=self.base.vars_of(remaining, range(k)), core=False
                )
            if isinstance(result, Unsat):
                return remaining
            if not isinstance(result, Sat):
                return []
            for step in range(k):
                valuation = valuation_at(self.ts, result.model, step)
                for candidate in remaining:
                    if self.candidates.status[candidate] is CandidateStatus.UNKNOWN and not evaluate(
                        candidate, valuation
                    ):
                        self.candidates.falsify(candidate, valuation)
            survivors = [c for c in remaining if self.candidates.status[c] is CandidateStatus.UNKNOWN]
            if len(survivors) == len(remaining):
                return []
            remaining = survivors
        return remaining

    async def step_filter(self, candidates: List[Term], k: int) -> Tuple[List[Term], List[Term]]:
        """Split candidates into a mutually k-inductive part and the rest."""
        session = self.step.session
        remaining = list(candidates)
        deferred: List[Term] = []
        while remaining:
            await self.checkpoint()
            async with session.scoped():
                for step in range(k):
                    for candidate in remaining:
                        await session.assert_term(at(candidate, step))
                await session.assert_term(mk_not(mk_and(*(at(c, k) for c in remaining))))
                result = await session.check(values=self.step.vars_of(remaining, [k]), core=False)
            if isinstance(result, Unsat):
                return remaining, deferred
            if not isinstance(result, Sat):
                return [], deferred + remaining
            valuation = valuation_at(self.ts, result.model, k)
            failing = [c for c in remaining if not evaluate(c, valuation)]
            if not failing:
                return [], deferred + remaining
            deferred.extend(failing)
            remaining = [c for c in remaining if c not in failing]
        return [], deferred
