"""Trace export and import as CSV, one row per step."""
import pandas as pd

from ..structures import StreamTrace


def export_trace(trace, path):
    trace.to_frame().to_csv(path, index=False)


def import_trace(path):
    # round_trip parsing reads back exactly the doubles that were written
    frame = pd.read_csv(path, float_precision="round_trip")
    return StreamTrace.from_frame(frame)
