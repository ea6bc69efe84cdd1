from itertools import product

import pytest

from minikind.framework.director import Director
from minikind.models.result import Trace
from minikind.postprocessing import SMOOTHED, smooth
from minikind.term import evaluate
from tests.oracle import load_bounds, simulate, violates
from tests.support import CORPUS_DIR, default_engines, load_corpus, run_config


def fewest_input_changes(name: str, prop_name: str, length: int) -> int:
    """Brute force over every bounded input sequence of the given length."""
    ts = load_corpus(name)
    domains = load_bounds(CORPUS_DIR / f"{name}.bounds").domains
    inputs = list(ts.inputs)
    choices = [dict(zip(inputs, values)) for values in product(*(domains[i] for i in inputs))]
    best = None
    for sequence in product(choices, repeat=length):
        valuations = simulate(ts, list(sequence))
        if valuations is None:
            continue
        previous = valuations[-2] if length > 1 else None
        if evaluate(ts.property(prop_name).term, valuations[-1], previous):
            continue
        changes = sum(
            1
            for i in inputs
            for t in range(1, length)
            if sequence[t][i] != sequence[t - 1][i]
        )
        best = changes if best is None else min(best, changes)
    assert best is not None
    return best


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_smoothing_removes_needless_input_changes(session):
    ts = load_corpus("ctr")
    trace = Trace(
        sorts={name: ts.sorts[name] for name in ["reset", "x", "ok1", "ok2"]},
        inputs=["reset"],
        steps=[
            {"reset": reset, "x": x, "ok1": True, "ok2": x < 3}
            for reset, x in [(True, 0), (False, 1), (False, 2), (False, 3)]
        ],
    )
    assert trace.input_deltas() == 1
    smoothed = await smooth(ts, "ok2", trace, session)
    assert smoothed.length == 4
    assert smoothed.input_deltas() == 0
    assert smoothed.annotation == SMOOTHED
    assert violates(ts, smoothed, "ok2")


@pytest.mark.requires_solver
@pytest.mark.asyncio
@pytest.mark.parametrize(
    "name, prop", [("nested_nodes", "ok2"), ("latch", "off"), ("arbiter", "idle"), ("ctr", "ok2")]
)
async def test_smoothed_traces_are_optimal(name, prop):
    ts = load_corpus(name)
    report = await Director(ts, run_config(default_engines(invgen=False), smooth=True)).run()
    result = report.result(prop)
    smoothed = result.smoothed_trace
    assert smoothed is not None
    assert smoothed.length == result.trace.length
    assert violates(ts, smoothed, prop)
    assert smoothed.input_deltas() <= result.trace.input_deltas()
    assert smoothed.input_deltas() == fewest_input_changes(name, prop, smoothed.length)


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_optimal_traces_come_back_unchanged(session):
    ts = load_corpus("countdown")
    report = await Director(ts, run_config(default_engines(invgen=False))).run()
    trace = report.result("running").trace
    assert await smooth(ts, "running", trace, session) is trace
