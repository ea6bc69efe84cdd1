from __future__ import annotations

import json
import os
from typing import Any, Dict, List, Optional

import jsonschema
from jinja2 import Environment, FileSystemLoader
from jsonschema import Draft202012Validator as SchemaValidator

from minikind.elaboration import TransitionSystem
from minikind.errors import ConfigError
from minikind.frontend import print_term
from minikind.models.result import (
    IvcResult,
    PropertyResult,
    RunReport,
    RunStats,
    Trace,
    Verdict,
    json_value,
)
from minikind.term import Sort, Value

REPORT_FORMAT = "mini-kind-report"
REPORT_VERSION = 1

DEFAULT_TEMPLATE_ENVIRONMENT = Environment(
    loader=FileSystemLoader("%s/templates/" % os.path.dirname(__file__)),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def render_template(template_name: str, template_environment: Environment, **kwargs):
    template = template_environment.get_template(template_name)
    return template.render(**kwargs)


def format_value(value: Value, sort: Sort) -> str:
    if sort is Sort.BOOL:
        return "true" if value else "false"
    return str(json_value(value, sort))


def trace_rows(trace: Trace) -> List[str]:
    """Steps as columns, one row per variable, inputs first."""
    header = ["step"] + [str(step) for step in range(trace.length)]
    rows = [header] + [
        [name] + [format_value(v, trace.sorts[name]) for v in trace.column(name)]
        for name in trace.variables
    ]
    label_width = max(len(row[0]) for row in rows) + 1
    widths = [max(len(row[i]) for row in rows) for i in range(1, len(header))]
    lines = []
    for row in rows:
        cells = " ".join(cell.rjust(width) for cell, width in zip(row[1:], widths))
        lines.append(f"{(row[0] + ':').ljust(label_width)} {cells}".rstrip())
    return lines


def ivc_entries(ivc: IvcResult, ts: Optional[TransitionSystem]) -> List[Dict[str, Any]]:
    entries = []
    for group in ivc.core:
        span = None
        path = group
        if ts is not None:
            origin = ts.provenance.get(group)
            if origin is not None:
                path = origin.path
            try:
                span = ts.equation(group).span
            except KeyError:
                pass
        entries.append({"equation": group, "path": path, "span": span})
    return entries


def _ivc_line(ivc: IvcResult, ts: Optional[TransitionSystem]) -> str:
    parts = []
    for entry in ivc_entries(ivc, ts):
        span = entry["span"]
        location = span.short() if span is not None else "?"
        parts.append(f"{location} ({entry['equation']})")
    return ", ".join(parts) if parts else "(empty)"


def _summary(result: PropertyResult) -> str:
    if result.verdict is Verdict.VALID:
        detail = f"k={result.k}, {result.engine}"
    elif result.verdict is Verdict.FALSIFIED:
        assert result.trace is not None
        detail = f"length {result.trace.length}, {result.engine}"
    else:
        detail = result.reason or "unknown"
    return f"{result.name}: {result.verdict.value.upper()} ({detail}, {result.wall_time:.2f}s)"


def render_text(
    report: RunReport,
    ts: Optional[TransitionSystem] = None,
    template_environment: Environment = DEFAULT_TEMPLATE_ENVIRONMENT,
) -> str:
    properties = []
    for result in report.results:
        properties.append(
            {
                "summary": _summary(result),
                "ivc": _ivc_line(result.ivc, ts) if result.ivc is not None else None,
                "minimal": result.ivc.minimal if result.ivc is not None else False,
                "invariants": [print_term(term) for term in result.invariants],
                "trace": trace_rows(result.trace) if result.trace is not None else None,
                "smoothed": (
                    trace_rows(result.smoothed_trace)
                    if result.smoothed_trace is not None
                    else None
                ),
                "smoothing_note": (
                    result.smoothed_trace.annotation if result.smoothed_trace is not None else None
                ),
            }
        )
    per_engine = ", ".join(f"{name} {count}" for name, count in report.stats.per_engine.items())
    return render_template(
        "report.txt.j2",
        template_environment,
        model=report.model,
        properties=properties,
        unused_inputs=report.unused_inputs,
        diagnostics=report.diagnostics,
        stats=report.stats,
        per_engine=per_engine,
    )


# json


def _ivc_to_json(ivc: IvcResult, ts: Optional[TransitionSystem]) -> Dict[str, Any]:
    return {
        "core": [
            {
                "equation": entry["equation"],
                "path": entry["path"],
                "span": None if entry["span"] is None else str(entry["span"]),
            }
            for entry in ivc_entries(ivc, ts)
        ],
        "invariants": [print_term(term) for term in ivc.reduced_invariants],
        "minimal": ivc.minimal,
        "depth": ivc.depth,
    }


def _result_to_json(result: PropertyResult, ts: Optional[TransitionSystem]) -> Dict[str, Any]:
    return {
        "name": result.name,
        "verdict": result.verdict.value,
        "reason": result.reason,
        "ivc": _ivc_to_json(result.ivc, ts) if result.ivc is not None else None,
        "counterexample": result.trace.to_json() if result.trace is not None else None,
        "smoothed_counterexample": (
            result.smoothed_trace.to_json() if result.smoothed_trace is not None else None
        ),
        # depends on which engine won the race
        "runtime": {
            "engine": result.engine,
            "k": result.k,
            "invariants": [print_term(term) for term in result.invariants],
            "wall_time": round(result.wall_time, 3),
        },
    }


def report_to_json(report: RunReport, ts: Optional[TransitionSystem] = None) -> Dict[str, Any]:
    return {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "model": report.model,
        "properties": [_result_to_json(result, ts) for result in report.results],
        "unused_inputs": list(report.unused_inputs),
        "runtime": {
            "check_sat_calls": report.stats.check_sat_calls,
            "per_engine": dict(report.stats.per_engine),
            "wall_time": round(report.stats.wall_time, 3),
            "diagnostics": dict(report.diagnostics),
        },
    }


def render_json(report: RunReport, ts: Optional[TransitionSystem] = None) -> str:
    return json.dumps(report_to_json(report, ts), indent=2) + "\n"


def report_from_json(data: Dict[str, Any]) -> RunReport:
    """Rebuild verdicts, traces and cores from a JSON report; invariant terms are not kept."""
    validate_report(data)
    results = []
    for entry in data["properties"]:
        ivc = entry["ivc"]
        trace = entry["counterexample"]
        smoothed = entry["smoothed_counterexample"]
        runtime = entry["runtime"]
        results.append(
            PropertyResult(
                name=entry["name"],
                verdict=Verdict(entry["verdict"]),
                engine=runtime["engine"],
                k=runtime["k"],
                reason=entry["reason"],
                wall_time=runtime["wall_time"],
                trace=Trace.from_json(trace) if trace is not None else None,
                smoothed_trace=Trace.from_json(smoothed) if smoothed is not None else None,
                ivc=(
                    IvcResult(
                        property_name=entry["name"],
                        core=[item["equation"] for item in ivc["core"]],
                        minimal=ivc["minimal"],
                        depth=ivc["depth"],
                    )
                    if ivc is not None
                    else None
                ),
            )
        )
    runtime = data["runtime"]
    return RunReport(
        model=data["model"],
        results=results,
        stats=RunStats(
            check_sat_calls=runtime["check_sat_calls"],
            per_engine=runtime["per_engine"],
            wall_time=runtime["wall_time"],
        ),
        unused_inputs=data["unused_inputs"],
        diagnostics=runtime["diagnostics"],
    )


def strip_runtime(data: Dict[str, Any]) -> Dict[str, Any]:
    """Report without its run-dependent sections, for comparing runs."""
    stripped = {key: value for key, value in data.items() if key != "runtime"}
    stripped["properties"] = [
        {key: value for key, value in entry.items() if key != "runtime"}
        for entry in data["properties"]
    ]
    return stripped


OUTPUT_SCHEMA_FILE = os.path.join(os.path.dirname(__file__), "output_schema.json")


def load_output_schema() -> Dict[str, Any]:
    with open(OUTPUT_SCHEMA_FILE, encoding="utf-8") as f:
        return json.load(f)


def validate_report(data: Dict[str, Any]):
    try:
        SchemaValidator(load_output_schema()).validate(data)
    except jsonschema.exceptions.ValidationError as e:
        raise ConfigError(f"not a mini-kind report: {e.message}") from e
