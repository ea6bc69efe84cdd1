from fractions import Fraction

import jsonschema
import pytest

from minikind.errors import ConfigError
from minikind.models.result import (
    IvcResult,
    PropertyResult,
    RunReport,
    RunStats,
    Trace,
    Verdict,
    json_value,
)
from minikind.report import (
    load_output_schema,
    render_json,
    render_text,
    report_from_json,
    report_to_json,
    strip_runtime,
    trace_rows,
)
from minikind.term import Sort
from tests.support import CTR, ts_from_source


def ctr_trace(annotation=None) -> Trace:
    return Trace(
        sorts={"reset": Sort.BOOL, "x": Sort.INT, "ok1": Sort.BOOL, "ok2": Sort.BOOL},
        inputs=["reset"],
        steps=[{"reset": False, "x": t, "ok1": True, "ok2": t < 3} for t in range(4)],
        annotation=annotation,
    )


@pytest.fixture
def report() -> RunReport:
    return RunReport(
        model="ctr.lus",
        results=[
            PropertyResult(
                name="ok1",
                verdict=Verdict.VALID,
                engine="kind",
                k=1,
                wall_time=0.5,
                ivc=IvcResult(property_name="ok1", core=["x", "ok1"], minimal=True),
            ),
            PropertyResult(
                name="ok2",
                verdict=Verdict.FALSIFIED,
                engine="bmc",
                wall_time=0.25,
                trace=ctr_trace(),
                smoothed_trace=ctr_trace("smoothed"),
            ),
        ],
        stats=RunStats(check_sat_calls=7, per_engine={"bmc": 4, "kind": 3}, wall_time=1.0),
        unused_inputs=["spare"],
    )


def test_trace_rows():
    rows = trace_rows(ctr_trace())
    assert rows[0].split() == ["step:", "0", "1", "2", "3"]
    assert [row.split()[0] for row in rows[1:]] == ["reset:", "x:", "ok1:", "ok2:"]
    assert rows[2].split() == ["x:", "0", "1", "2", "3"]
    assert rows[4].split() == ["ok2:", "true", "true", "true", "false"]
    # columns line up
    assert len({len(row) for row in rows}) == 1


def test_exact_json_values():
    assert json_value(Fraction(1, 3), Sort.REAL) == "1/3"
    assert json_value(Fraction(-1, 4), Sort.REAL) == "-1/4"
    assert json_value(Fraction(2), Sort.REAL) == "2"
    assert json_value(True, Sort.BOOL) is True


def test_text_report(report):
    text = render_text(report, ts_from_source(CTR, "ctr.lus"))
    lines = text.splitlines()
    assert lines[0] == "mini-kind report for ctr.lus"
    assert "ok1: VALID (k=1, kind, 0.50s)" in lines
    assert "  IVC: ctr.lus:4 (x), ctr.lus:5 (ok1)" in lines
    assert "ok2: FALSIFIED (length 4, bmc, 0.25s)" in lines
    assert "  counterexample:" in lines
    assert "  counterexample (smoothed):" in lines
    assert "unused inputs: spare" in lines
    assert "check-sat calls: 7 (bmc 4, kind 3)" in lines
    assert lines[-1] == "wall time: 1.00s"
    assert text.endswith("\n")


def test_unknown_and_diagnostics(report):
    report.results[0] = PropertyResult(name="ok1", verdict=Verdict.UNKNOWN, reason="timeout")
    report.diagnostics = {"pdr:ok1": "ProtocolError: bad answer"}
    lines = render_text(report).splitlines()
    assert "ok1: UNKNOWN (timeout, 0.00s)" in lines
    assert "engine pdr:ok1 stopped early: ProtocolError: bad answer" in lines


def test_json_matches_the_schema(report):
    data = report_to_json(report, ts_from_source(CTR, "ctr.lus"))
    jsonschema.validate(data, load_output_schema())
    assert data["properties"][0]["ivc"]["core"][0] == {
        "equation": "x",
        "path": "main.x",
        "span": "ctr.lus:4:3",
    }
    assert data["properties"][1]["counterexample"]["variables"][0] == {
        "name": "reset",
        "sort": "bool",
        "input": True,
        "values": [False, False, False, False],
    }


def test_schema_rejects_unknown_fields(report):
    data = report_to_json(report)
    data["extra"] = 1
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(data, load_output_schema())


def test_loading_rejects_a_foreign_document(report):
    data = report_to_json(report)
    data["format"] = "other-tool"
    with pytest.raises(ConfigError, match="not a mini-kind report"):
        report_from_json(data)


def test_json_round_trip(report):
    data = report_to_json(report)
    rebuilt = report_from_json(data)
    assert rebuilt.verdicts == report.verdicts
    assert rebuilt.result("ok2").trace == report.result("ok2").trace
    assert report_to_json(rebuilt) == data


def test_strip_runtime(report):
    data = report_to_json(report)
    stripped = strip_runtime(data)
    assert "runtime" not in stripped
    assert all("runtime" not in entry for entry in stripped["properties"])
    assert stripped["properties"][0]["verdict"] == "valid"
    assert "runtime" in data


def test_render_json_is_stable(report):
    text = render_json(report)
    assert text.endswith("}\n")
    assert text == render_json(report)
