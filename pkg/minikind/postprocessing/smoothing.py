from __future__ import annotations

from typing import List, Optional

from loguru import logger

from minikind.elaboration import TransitionSystem
from minikind.engines.unroller import Unroller, at, var_at
from minikind.models.result import Trace
from minikind.postprocessing.cardinality import SequentialCounter
from minikind.solver import Sat, SolverSession, Unsat
from minikind.term import Sort, Term, mk_eq, mk_neq, mk_not, mk_var

SMOOTHED = "smoothed"
SMOOTHING_TIMEOUT = "smoothing-timeout"


async def smooth(ts: TransitionSystem, prop_name: str, trace: Trace, session: SolverSession) -> Trace:
    """Same-length counterexample with the fewest input changes.

    Each (input, step) pair gets an indicator that the input changed; a
    binary search over a cardinality bound finds the least number of
    changes. A trace that is already optimal comes back unchanged.
    """
    length = trace.length
    current = trace.input_deltas()
    if length <= 1 or current == 0:
        return trace
    prop = ts.property(prop_name)
    unroller = Unroller(ts, session)
    await unroller.extend_to(length, initialized=True)
    await session.assert_term(mk_not(at(prop.term, length - 1)))

    sorts = ts.sorts
    indicators: List[Term] = []
    for name in ts.inputs:
        for step in range(1, length):
            changed = mk_var(f"%changed.{name}.{step}", Sort.BOOL)
            previous, now = var_at(name, sorts[name], step - 1), var_at(name, sorts[name], step)
            await session.assert_term(mk_eq(changed, mk_neq(now, previous)))
            indicators.append(changed)
    counter = SequentialCounter(indicators, "%count")
    for clause in counter.clauses():
        await session.assert_term(clause)

    best: Optional[dict] = None
    low, high = 0, current
    while low < high:
        bound = (low + high) // 2
        limit = counter.at_most(bound)
        assert limit is not None
        result = await session.check(
            assumptions=[(f"at-most-{bound}", limit)],
            values=unroller.trace_vars(length),
            core=False,
        )
        if isinstance(result, Sat):
            best, high = result.model, bound
        elif isinstance(result, Unsat):
            low = bound + 1
        else:
            logger.warning(f"smoothing {prop_name} gave up ({result.reason})")
            return trace.annotated(SMOOTHING_TIMEOUT)
    if best is None:
        return trace
    smoothed = unroller.trace(best, length).annotated(SMOOTHED)
    logger.info(f"smoothed {prop_name}: {current} -> {smoothed.input_deltas()} input changes")
    return smoothed
