import pytest

from minikind.framework.director import UNKNOWN_EXHAUSTED, UNKNOWN_NO_BASE, Director
from minikind.models.engine import BmcEngineConfig, KInductionEngineConfig
from minikind.models.result import Verdict
from tests.support import CTR, default_engines, load_corpus, run_config, ts_from_source


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_inductive_property_is_valid_at_k1():
    ts = ts_from_source(CTR)
    report = await Director(ts, run_config(default_engines(invgen=False, pdr=False))).run()
    ok1 = report.result("ok1")
    assert ok1.verdict is Verdict.VALID
    assert ok1.engine == "kind"
    assert ok1.k == 1
    assert report.result("ok2").verdict is Verdict.FALSIFIED


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_step_alone_is_never_valid():
    ts = ts_from_source(CTR)
    config = run_config([KInductionEngineConfig(max_k=3)])
    report = await Director(ts, config).run()
    ok1 = report.result("ok1")
    assert ok1.verdict is Verdict.UNKNOWN
    assert ok1.reason == UNKNOWN_NO_BASE
    assert report.result("ok2").reason == UNKNOWN_EXHAUSTED


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_deeper_induction_needs_a_deeper_base_case():
    ts = load_corpus("edge_detector")
    report = await Director(ts, run_config(default_engines(invgen=False, pdr=False))).run()
    isolated = report.result("isolated")
    assert isolated.verdict is Verdict.VALID
    assert isolated.k is not None


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_non_inductive_property_stays_unknown_without_invariants():
    ts = load_corpus("looping_counter")
    engines = [BmcEngineConfig(max_depth=25), KInductionEngineConfig(max_k=20)]
    report = await Director(ts, run_config(engines)).run()
    ok = report.result("ok")
    assert ok.verdict is Verdict.UNKNOWN
    assert ok.reason == UNKNOWN_EXHAUSTED
    # one step query per depth up to the limit
    assert report.stats.per_engine["kind"] >= 20


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_generated_invariants_strengthen_induction():
    ts = load_corpus("looping_counter")
    report = await Director(ts, run_config(default_engines(pdr=False))).run()
    ok = report.result("ok")
    assert ok.verdict is Verdict.VALID
    assert ok.engine == "kind"
    assert ok.invariants
