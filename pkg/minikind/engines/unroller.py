from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional

from minikind.elaboration import TransitionSystem
from minikind.models.result import Trace
from minikind.solver import SolverSession
from minikind.term import (
    Sort,
    Term,
    Value,
    Var,
    free_vars,
    instantiate,
    mk_eq,
    mk_not,
    mk_var,
    step_name,
)


def at(term: Term, step: int) -> Term:
    return instantiate(term, step)


def var_at(name: str, sort: Sort, step: int) -> Var:
    return mk_var(step_name(name, step), sort)


def valuation_at(ts: TransitionSystem, model: Mapping[str, Value], step: int) -> Dict[str, Value]:
    """Unindexed valuation of one step, for every variable the model covers."""
    values = {}
    for name, _ in ts.vars:
        key = step_name(name, step)
        if key in model:
            values[name] = model[key]
    return values


def trace_from_model(ts: TransitionSystem, model: Mapping[str, Value], length: int) -> Trace:
    """Steps 0..length-1 of a model, over inputs and source-level variables."""
    sorts = {name: sort for name, sort in ts.vars if not name.startswith("%")}
    steps = [
        {name: model[step_name(name, step)] for name in sorts} for step in range(length)
    ]
    return Trace(sorts=sorts, inputs=list(ts.inputs), steps=steps)


class Unroller:
    """Step-indexed copies of a transition system asserted into one session.

    Step t names every variable `v$t`; prev references at step t read
    `v$(t-1)`. The init flag is pinned per step by `add_step`.
    """

    def __init__(self, ts: TransitionSystem, session: SolverSession):
        self.ts = ts
        self.session = session
        self.steps = 0

    def init_at(self, step: int) -> Var:
        return var_at(self.ts.init_flag, Sort.BOOL, step)

    def equations_at(self, step: int) -> List[Term]:
        sorts = self.ts.sorts
        return [
            mk_eq(var_at(eq.lhs, sorts[eq.lhs], step), at(eq.rhs, step)) for eq in self.ts.equations
        ]

    def assertions_at(self, step: int) -> List[Term]:
        return [at(term, step) for term in self.ts.assertions]

    def transition_at(self, step: int) -> List[Term]:
        return self.equations_at(step) + self.assertions_at(step)

    def init_literal(self, step: int, init: bool) -> Term:
        flag = self.init_at(step)
        return flag if init else mk_not(flag)

    async def add_step(self, init: Optional[bool]):
        """Assert the next step; `init` None leaves the init flag free."""
        step = self.steps
        for term in self.transition_at(step):
            await self.session.assert_term(term)
        if init is not None:
            await self.session.assert_term(self.init_literal(step, init))
        self.steps += 1

    async def extend_to(self, length: int, initialized: bool):
        """Add steps until `length` exist; step 0 is initial when `initialized`."""
        while self.steps < length:
            if self.steps == 0:
                await self.add_step(True if initialized else None)
            else:
                await self.add_step(False)

    async def assert_everywhere(self, term: Term):
        for step in range(self.steps):
            await self.session.assert_term(at(term, step))

    def step_vars(self, step: int, include_generated: bool = False) -> List[Var]:
        return [
            var_at(name, sort, step)
            for name, sort in self.ts.vars
            if include_generated or not name.startswith("%")
        ]

    def trace_vars(self, length: int) -> List[Var]:
        return [var for step in range(length) for var in self.step_vars(step)]

    def vars_of(self, terms: Iterable[Term], steps: Iterable[int]) -> List[Var]:
        """Step-indexed copies of the variables occurring in terms."""
        names = sorted({(v.name, v.sort) for t in terms for v in free_vars(t)})
        return [var_at(name, sort, step) for step in steps for name, sort in names]

    def trace(self, model: Mapping[str, Value], length: int) -> Trace:
        return trace_from_model(self.ts, model, length)
