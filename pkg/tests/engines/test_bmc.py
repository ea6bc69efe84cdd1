import pytest

from minikind.framework.director import UNKNOWN_BASE_PENDING, UNKNOWN_EXHAUSTED, Director
from minikind.models.engine import BmcEngineConfig, KInductionEngineConfig
from minikind.models.result import Verdict
from minikind.solver import SolverSession, Unknown
from tests.oracle import violates
from tests.support import CTR, load_corpus, run_config, ts_from_source


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_bmc_alone_falsifies_with_a_shortest_trace():
    ts = ts_from_source(CTR, "ctr.lus")
    report = await Director(ts, run_config([BmcEngineConfig(max_depth=6)])).run()

    ok2 = report.result("ok2")
    assert ok2.verdict is Verdict.FALSIFIED
    assert ok2.engine == "bmc"
    assert ok2.trace.length == 4
    assert ok2.trace.column("x") == [0, 1, 2, 3]
    assert ok2.trace.column("reset")[1:] == [False, False, False]
    assert violates(ts, ok2.trace, "ok2")

    # BMC never proves anything
    ok1 = report.result("ok1")
    assert ok1.verdict is Verdict.UNKNOWN
    assert ok1.reason == UNKNOWN_EXHAUSTED


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_depth_zero_violation():
    ts = load_corpus("const_false")
    report = await Director(ts, run_config([BmcEngineConfig(max_depth=3)])).run()
    assert report.result("ok").trace.length == 1


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_assertions_constrain_counterexamples():
    ts = load_corpus("assertion_guard")
    report = await Director(ts, run_config([BmcEngineConfig(max_depth=4)])).run()
    trace = report.result("small").trace
    assert trace.length == 2
    assert all(0 <= value <= 3 for value in trace.column("i"))
    assert report.stats.per_engine["bmc"] >= 2


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_an_undecided_query_only_drops_its_property(mocker):
    check = SolverSession.check
    bmc_calls = []

    async def first_bmc_query_times_out(self, *args, **kwargs):
        if self.name == "bmc":
            bmc_calls.append(1)
            if len(bmc_calls) == 1:
                return Unknown("timeout")
        return await check(self, *args, **kwargs)

    mocker.patch.object(SolverSession, "check", first_bmc_query_times_out)
    ts = ts_from_source(CTR, "ctr.lus")
    engines = [BmcEngineConfig(max_depth=6), KInductionEngineConfig(max_k=3)]
    report = await Director(ts, run_config(engines)).run()

    # ok1 was the first query; ok2 is still searched and found
    assert report.result("ok2").verdict is Verdict.FALSIFIED
    assert report.result("ok2").trace.length == 4
    # no base case is claimed, so the induction proof of ok1 stays gated
    assert report.result("ok1").verdict is Verdict.UNKNOWN
    assert report.result("ok1").reason == UNKNOWN_BASE_PENDING
