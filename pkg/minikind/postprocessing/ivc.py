from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from loguru import logger

from minikind.elaboration import Equation, TransitionSystem
from minikind.engines.unroller import Unroller, at, var_at
from minikind.errors import CapabilityError
from minikind.models.result import IvcResult
from minikind.solver import SolverSession, Unsat
from minikind.term import Sort, Term, mk_and, mk_eq, mk_implies, mk_not, mk_var

# joint proofs are searched up to at least this depth
MIN_SEARCH_DEPTH = 3
# deletion tests may use this many steps more than the joint proof
DEPTH_SLACK = 2


class InductionChecker:
    """k-induction of a property together with invariants, over a subset of equation groups.

    Equations outside the subset are not asserted, so the variables they
    define behave as free inputs.
    """

    def __init__(self, ts: TransitionSystem, prop_name: str, session: SolverSession):
        self.ts = ts
        self.prop = ts.property(prop_name)
        self.session = session
        self.unroller = Unroller(ts, session)
        self.groups: Dict[str, List[Equation]] = {}
        for eq in ts.equations:
            self.groups.setdefault(eq.group, []).append(eq)

    def group_at(self, group: str, step: int) -> List[Term]:
        sorts = self.ts.sorts
        return [
            mk_eq(var_at(eq.lhs, sorts[eq.lhs], step), at(eq.rhs, step))
            for eq in self.groups[group]
        ]

    def goal_at(self, invariants: Sequence[Term], step: int) -> Term:
        return mk_and(*(at(term, step) for term in [self.prop.term, *invariants]))

    async def assert_frame(
        self, step: int, initialized: bool, groups: Sequence[str], flags: Dict[str, Term]
    ):
        """Equations of `groups` at step (guarded when flagged), assertions and the init flag."""
        for group in groups:
            for term in self.group_at(group, step):
                flag = flags.get(group)
                await self.session.assert_term(term if flag is None else mk_implies(flag, term))
        for term in self.unroller.assertions_at(step):
            await self.session.assert_term(term)
        if step > 0:
            await self.session.assert_term(self.unroller.init_literal(step, False))
        elif initialized:
            await self.session.assert_term(self.unroller.init_literal(0, True))

    async def proves(self, groups: Sequence[str], invariants: Sequence[Term], depth: int) -> bool:
        """Base case and inductive step at `depth` both hold."""
        async with self.session.scoped():
            for step in range(depth):
                await self.assert_frame(step, True, groups, {})
            await self.session.assert_term(
                mk_not(mk_and(*(self.goal_at(invariants, step) for step in range(depth))))
            )
            if not isinstance(await self.session.check(core=False), Unsat):
                return False
        async with self.session.scoped():
            for step in range(depth + 1):
                await self.assert_frame(step, False, groups, {})
            for step in range(depth):
                await self.session.assert_term(self.goal_at(invariants, step))
            await self.session.assert_term(mk_not(self.goal_at(invariants, depth)))
            return isinstance(await self.session.check(core=False), Unsat)

    async def proves_within(
        self, groups: Sequence[str], invariants: Sequence[Term], depths: Iterable[int]
    ) -> bool:
        for depth in depths:
            if await self.proves(groups, invariants, depth):
                return True
        return False

    async def core(
        self, groups: Sequence[str], invariants: Sequence[Term], depth: int
    ) -> Tuple[List[str], List[Term]]:
        """Groups and invariants named in the unsat core of either proof query.

        Every group and invariant sits behind an activation literal passed
        as an assumption; an invariant's literal guards both its use as a
        hypothesis and as a goal.
        """
        self.session.require_unsat_cores()
        flags: Dict[str, Term] = {g: mk_var(f"%act.eq.{i}", Sort.BOOL) for i, g in enumerate(groups)}
        invariant_flags = [mk_var(f"%act.inv.{i}", Sort.BOOL) for i in range(len(invariants))]
        assumptions = [(f"eq:{g}", flag) for g, flag in flags.items()]
        assumptions += [(f"inv:{i}", flag) for i, flag in enumerate(invariant_flags)]

        def goal(step: int) -> Term:
            guarded = [
                mk_implies(flag, at(term, step)) for flag, term in zip(invariant_flags, invariants)
            ]
            return mk_and(at(self.prop.term, step), *guarded)

        labels: Set[str] = set()
        async with self.session.scoped():
            for step in range(depth):
                await self.assert_frame(step, True, groups, flags)
            await self.session.assert_term(mk_not(mk_and(*(goal(step) for step in range(depth)))))
            labels |= await self._core(assumptions)
        async with self.session.scoped():
            for step in range(depth + 1):
                await self.assert_frame(step, False, groups, flags)
            for step in range(depth):
                await self.session.assert_term(goal(step))
            await self.session.assert_term(mk_not(goal(depth)))
            labels |= await self._core(assumptions)
        kept_groups = [g for g in groups if f"eq:{g}" in labels]
        kept_invariants = [t for i, t in enumerate(invariants) if f"inv:{i}" in labels]
        return kept_groups, kept_invariants

    async def _core(self, assumptions) -> FrozenSet[str]:
        result = await self.session.check(assumptions=assumptions)
        if not isinstance(result, Unsat):
            # undecided: keep everything
            return frozenset(label for label, _ in assumptions)
        return result.core


async def joint_depth(
    checker: InductionChecker, groups: Sequence[str], invariants: Sequence[Term], k: int
) -> Optional[int]:
    """Smallest depth in [k, max(k, 3)] proving property and invariants together."""
    for depth in range(max(k, 1), max(k, MIN_SEARCH_DEPTH) + 1):
        if await checker.proves(groups, invariants, depth):
            return depth
    return None


async def compute_ivc(
    ts: TransitionSystem,
    prop_name: str,
    k: int,
    invariants: Sequence[Term],
    session: SolverSession,
) -> IvcResult:
    """Inductive validity core of a proven property.

    An unsat core over activation literals gives a first over-approximation,
    then each surviving equation group and invariant is deleted in turn if
    the proof still goes through without it.
    """
    checker = InductionChecker(ts, prop_name, session)
    groups = ts.groups()
    invariants = list(dict.fromkeys(invariants))
    depth = await joint_depth(checker, groups, invariants, k)
    if depth is None:
        logger.warning(f"no joint proof of {prop_name} and its invariants, core not reduced")
        return IvcResult(
            property_name=prop_name, core=groups, reduced_invariants=invariants, depth=k
        )

    try:
        groups, invariants = await checker.core(groups, invariants, depth)
    except CapabilityError as e:
        logger.warning(f"{e}; skipping the core over-approximation")
    logger.debug(f"{prop_name}: core over-approximation {groups}")

    depths = range(depth, depth + DEPTH_SLACK + 1)
    minimal = False
    while not minimal:
        minimal = True
        for group in list(groups):
            remaining = [g for g in groups if g != group]
            if await checker.proves_within(remaining, invariants, depths):
                groups = remaining
                minimal = False
        for invariant in list(invariants):
            remaining_invariants = [t for t in invariants if t != invariant]
            if await checker.proves_within(groups, remaining_invariants, depths):
                invariants = remaining_invariants
                minimal = False
    logger.info(f"{prop_name}: core of {len(groups)} equations, {len(invariants)} invariants")
    return IvcResult(
        property_name=prop_name,
        core=groups,
        reduced_invariants=invariants,
        minimal=True,
        depth=depth,
    )
