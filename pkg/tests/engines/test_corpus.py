"""Engine verdicts on the corpus against the explicit-state simulator."""

import pytest

from minikind.framework.director import Director
from minikind.models.result import Verdict
from tests.oracle import UnsupportedDomain, enumerate_verdicts, load_bounds, violates
from tests.support import CORPUS_DIR, corpus_names, load_corpus, run_config

ORACLE_DEPTH = 8


@pytest.mark.requires_solver
@pytest.mark.asyncio
@pytest.mark.parametrize("name", corpus_names())
async def test_verdicts_match_expectations(name):
    ts = load_corpus(name)
    bounds = load_bounds(CORPUS_DIR / f"{name}.bounds")
    report = await Director(ts, run_config(minimal_cex=True), model=name).run()

    assert {prop: verdict.value for prop, verdict in report.verdicts.items()} == bounds.expected
    for result in report.results:
        if result.verdict is Verdict.FALSIFIED:
            assert violates(ts, result.trace, result.name)
        if result.verdict is Verdict.VALID:
            assert result.k is not None and result.k >= 1


@pytest.mark.requires_solver
@pytest.mark.asyncio
@pytest.mark.parametrize("name", corpus_names())
async def test_counterexamples_are_minimal(name):
    ts = load_corpus(name)
    bounds = load_bounds(CORPUS_DIR / f"{name}.bounds")
    try:
        oracle = enumerate_verdicts(ts, bounds, ORACLE_DEPTH)
    except UnsupportedDomain as e:
        pytest.skip(str(e))
    report = await Director(ts, run_config(minimal_cex=True), model=name).run()

    for result in report.results:
        expected = oracle[result.name]
        if result.verdict is Verdict.FALSIFIED:
            assert expected.violated
            assert result.trace.length == expected.length
        else:
            assert not expected.violated


def test_oracle_finds_the_shortest_violation():
    ts = load_corpus("ctr")
    verdicts = enumerate_verdicts(ts, load_bounds(CORPUS_DIR / "ctr.bounds"), ORACLE_DEPTH)
    assert not verdicts["ok1"].violated
    assert verdicts["ok2"].length == 4
    assert [step["x"] for step in verdicts["ok2"].trace] == [0, 1, 2, 3]


def test_oracle_respects_assertions():
    ts = load_corpus("assertion_guard")
    verdicts = enumerate_verdicts(ts, load_bounds(CORPUS_DIR / "assertion_guard.bounds"), 4)
    assert not verdicts["nonneg"].violated
    assert verdicts["small"].length == 2
