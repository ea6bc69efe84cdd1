from minikind.engines.unroller import Unroller, trace_from_model, valuation_at
from minikind.term import free_vars
from tests.support import CTR, ts_from_source


def test_step_copies_read_the_previous_step():
    ts = ts_from_source(CTR)
    unroller = Unroller(ts, session=None)
    x_at_1 = unroller.equations_at(1)[0]
    assert {var.name for var in free_vars(x_at_1)} == {"x$1", "reset$1", "%init$1", "x$0"}
    assert not any(var.prev for var in free_vars(x_at_1))


def test_trace_vars_skip_generated_names():
    ts = ts_from_source(CTR)
    names = [var.name for var in Unroller(ts, session=None).trace_vars(2)]
    assert "%init$0" not in names
    assert names[:4] == ["reset$0", "x$0", "ok1$0", "ok2$0"]
    assert len(names) == 8


def test_trace_from_model():
    ts = ts_from_source(CTR)
    model = {}
    for step, x in enumerate([0, 1]):
        model.update(
            {
                f"%init${step}": step == 0,
                f"reset${step}": False,
                f"x${step}": x,
                f"ok1${step}": True,
                f"ok2${step}": True,
            }
        )
    trace = trace_from_model(ts, model, 2)
    assert trace.inputs == ["reset"]
    assert trace.column("x") == [0, 1]
    assert "%init" not in trace.sorts
    assert valuation_at(ts, model, 1)["%init"] is False
