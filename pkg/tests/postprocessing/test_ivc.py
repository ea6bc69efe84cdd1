from itertools import combinations

import pytest

from minikind.framework.director import Director
from minikind.models.result import Verdict
from minikind.postprocessing import InductionChecker, compute_ivc
from minikind.term import Sort, mk_int, mk_le, mk_var
from tests.support import default_engines, load_corpus, run_config


async def proves_somewhere(checker, groups, depths=range(1, 4)):
    return await checker.proves_within(groups, [], depths)


@pytest.mark.requires_solver
@pytest.mark.asyncio
@pytest.mark.parametrize("name, expected", [("ok", {"y", "z", "ok"}), ("ok2", {"x", "ok2"})])
async def test_minimal_core_of_the_fixture(name, expected, session):
    ts = load_corpus("ivc_fixture")
    ivc = await compute_ivc(ts, name, 1, [], session)
    assert set(ivc.core) == expected
    assert ivc.minimal
    assert ivc.depth == 1
    # source order
    assert ivc.core == [group for group in ts.groups() if group in expected]


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_core_matches_brute_force(session):
    ts = load_corpus("ivc_fixture")
    checker = InductionChecker(ts, "ok", session)
    groups = ts.groups()
    proving = []
    for size in range(len(groups) + 1):
        for subset in combinations(groups, size):
            if any(set(smaller) <= set(subset) for smaller in proving):
                continue
            if await proves_somewhere(checker, list(subset)):
                proving.append(subset)
    ivc = await compute_ivc(ts, "ok", 1, [], session)
    assert set(ivc.core) in [set(subset) for subset in proving]


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_core_still_proves_the_property(session):
    ts = load_corpus("nested_nodes")
    ivc = await compute_ivc(ts, "ok1", 1, [], session)
    checker = InductionChecker(ts, "ok1", session)
    assert await checker.proves(ivc.core, ivc.reduced_invariants, ivc.depth)
    assert "ok2" not in ivc.core
    # dropping any single group breaks the proof
    for group in ivc.core:
        remaining = [g for g in ivc.core if g != group]
        assert not await proves_somewhere(checker, remaining)


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_unneeded_invariants_are_removed(session):
    ts = load_corpus("looping_counter")
    c = mk_var("c", Sort.INT)
    useful = mk_le(c, mk_int(10))
    useless = mk_le(mk_int(-100), c)
    ivc = await compute_ivc(ts, "ok", 1, [useless, useful], session)
    assert ivc.reduced_invariants == [useful]
    assert set(ivc.core) == {"c", "ok"}


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_director_attaches_cores():
    ts = load_corpus("ivc_fixture")
    report = await Director(ts, run_config(default_engines(invgen=False), ivc=True)).run()
    for result in report.results:
        assert result.verdict is Verdict.VALID
        assert result.ivc is not None
        assert result.ivc.minimal
    assert set(report.result("ok2").ivc.core) == {"x", "ok2"}


@pytest.mark.requires_solver
@pytest.mark.asyncio
@pytest.mark.parametrize("name", ["ivc_fixture", "nested_nodes"])
async def test_restricted_system_reproves_each_property(name):
    ts = load_corpus(name)
    report = await Director(ts, run_config(default_engines(invgen=False), ivc=True)).run()
    for result in report.results:
        if result.verdict is not Verdict.VALID:
            continue
        restricted = ts.restricted(result.ivc.core).with_properties([result.name])
        assert set(restricted.groups()) == set(result.ivc.core)
        rerun = await Director(restricted, run_config(default_engines(invgen=False))).run()
        assert rerun.result(result.name).verdict is Verdict.VALID
