import pytest

from minikind.advice import HEADER, advice_entries, load_advice, save_advice
from minikind.errors import AdviceFormatError, AdviceIoError
from minikind.framework.director import Director
from minikind.models.result import Verdict
from minikind.term import Sort, mk_ge, mk_int, mk_le, mk_prev, mk_var
from tests.support import CTR, default_engines, load_corpus, run_config, ts_from_source

x = mk_var("x", Sort.INT)
ok1 = mk_var("ok1", Sort.BOOL)


def test_round_trip(tmp_path):
    ts = ts_from_source(CTR)
    path = tmp_path / "ctr.advice"
    save_advice(path, [mk_ge(x, mk_int(0)), ok1, mk_ge(x, mk_prev(x))], ts)

    assert path.read_text().splitlines() == [HEADER, "ok1", "x >= 0"]
    loaded = load_advice(path, ts)
    assert set(loaded.candidates) == {ok1, mk_ge(x, mk_int(0))}
    assert loaded.dropped == 0


def test_entries_are_sorted_and_unique():
    ts = ts_from_source(CTR)
    invariants = [mk_le(x, mk_int(9)), mk_ge(x, mk_int(0)), mk_le(x, mk_int(9))]
    assert advice_entries(invariants, ts) == ["x <= 9", "x >= 0"]


def test_stale_entries_are_dropped(tmp_path):
    path = tmp_path / "stale.advice"
    path.write_text(f"{HEADER}\nx >= 0\nrenamed >= 1\nx +\nx + 1\n\n")
    loaded = load_advice(path, ts_from_source(CTR))
    assert loaded.candidates == [mk_ge(x, mk_int(0))]
    assert loaded.dropped == 3


@pytest.mark.parametrize(
    "first_line", ["", "mini-kind-advice", "something-else 1", "mini-kind-advice 2"]
)
def test_bad_header(tmp_path, first_line):
    path = tmp_path / "bad.advice"
    path.write_text(f"{first_line}\nx >= 0\n")
    with pytest.raises(AdviceFormatError):
        load_advice(path, ts_from_source(CTR))


def test_missing_file(tmp_path):
    with pytest.raises(AdviceIoError):
        load_advice(tmp_path / "nope.advice", ts_from_source(CTR))


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_false_advice_changes_no_verdict(tmp_path):
    path = tmp_path / "false.advice"
    path.write_text(f"{HEADER}\nx <= 1\nnot ok2\n")
    ts = ts_from_source(CTR)
    advice = load_advice(path, ts).candidates
    engines = default_engines(invgen=False, pdr=False)

    report = await Director(ts, run_config(engines), advice=advice).run()
    assert report.verdicts == {"ok1": Verdict.VALID, "ok2": Verdict.FALSIFIED}
    assert mk_le(x, mk_int(1)) not in report.result("ok1").invariants


@pytest.mark.requires_solver
@pytest.mark.asyncio
async def test_replayed_advice_saves_solver_work(tmp_path):
    path = tmp_path / "looping.advice"
    ts = load_corpus("looping_counter")
    engines = default_engines(pdr=False)
    saved = await Director(ts, run_config(engines, ivc=True, write_advice=str(path))).run()
    assert saved.result("ok").verdict is Verdict.VALID
    assert path.read_text().splitlines()[0] == HEADER

    cold = await Director(ts, run_config(engines)).run()
    advice = load_advice(path, ts).candidates
    assert advice
    warm = await Director(
        ts, run_config(default_engines(invgen=False, pdr=False)), advice=advice
    ).run()
    assert warm.result("ok").verdict is Verdict.VALID
    # the proved advice closes the property without deepening
    assert warm.result("ok").k == 1
    assert "advice" in warm.stats.per_engine
    assert warm.stats.check_sat_calls <= 0.5 * cold.stats.check_sat_calls


def test_renaming_a_variable_drops_only_its_entries(tmp_path):
    path = tmp_path / "ctr.advice"
    save_advice(path, [mk_ge(x, mk_int(0)), ok1], ts_from_source(CTR))
    renamed = ts_from_source(CTR.replace("x", "count"))
    loaded = load_advice(path, renamed)
    assert loaded.candidates == [ok1]
    assert loaded.dropped == 1
