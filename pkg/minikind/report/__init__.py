from minikind.report.render import (
    REPORT_FORMAT,
    REPORT_VERSION,
    load_output_schema,
    render_json,
    render_text,
    report_from_json,
    report_to_json,
    strip_runtime,
    trace_rows,
    validate_report,
)
