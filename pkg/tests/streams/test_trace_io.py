import numpy as np

from ..context import online_risk_control  # noqa: F401
from online_risk_control.streams import export_trace, import_trace
from online_risk_control.structures import EMPTY_SET, FULL_SPACE, Interval, StreamTrace


def test_exported_trace_reads_back_exactly(tmp_path):
    trace = StreamTrace()
    trace.record(1, 0.0, 0.1, 0.1 + 0.05 * (0.0 - 0.1), Interval(1 / 3, 2 / 3), 1.0, group=0, label=0.4)
    trace.record(2, 1.0, 0.095, 0.095 + 0.05 * 0.9, EMPTY_SET, 0.0, group=0, label=2.0)
    trace.record(3, 0.0, 0.14, 0.135, FULL_SPACE, 1.0, group=1, label=-7.25)
    trace.record(4, 1.0, 0.135, 0.18, Interval(-1e-9, 1e12), 0.0, group=1, label=1e13)
    trace.record(5, 0.0, 0.18, 0.175, Interval(0.1 + 0.2, 0.7), 1.0, label=0.5)
    path = tmp_path / "trace.csv"

    export_trace(trace, path)
    restored = import_trace(path)

    assert restored.steps == trace.steps
    assert restored.losses == trace.losses
    assert restored.theta_pre == trace.theta_pre
    assert restored.theta_post == trace.theta_post
    np.testing.assert_array_equal(restored.set_lo, trace.set_lo)
    np.testing.assert_array_equal(restored.set_hi, trace.set_hi)
    assert restored.set_size == trace.set_size
    assert restored.coverage == trace.coverage
    assert restored.labels == trace.labels
    assert restored.groups[-1] is None


def test_multi_risk_trace(tmp_path):
    trace = StreamTrace(num_risks=2)
    trace.record(1, [0.25, 0.0], [1.0, 1.0], [0.9875, 1.005], Interval(0, 1), 0.75)
    path = tmp_path / "multi.csv"

    export_trace(trace, path)
    restored = import_trace(path)

    assert restored.num_risks == 2
    assert restored.theta_post == [(0.9875, 1.005)]
