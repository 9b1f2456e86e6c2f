"""Post-hoc metrics over completed traces.

Coverage flags are 1 for a covered step and 0 for a miscovered one.
"""
import math
from collections import namedtuple

import numpy as np
import pandas as pd
from sklearn.metrics import mean_pinball_loss

LENGTH_QUANTILES = (0.1, 0.25, 0.5, 0.75, 0.9)

EvalReport = namedtuple("EvalReport", [
    "coverage", "mc_risk", "msl", "delta_coverage", "mean_length", "length_quantiles", "window",
    "full_space_rate", "pinball_loss", "risks", "steps",
])


def _flags(covered, name="covered"):
    flags = np.asarray(covered, dtype=float).ravel()
    if flags.size == 0:
        raise ValueError(f"[{name}] is empty")
    return flags == 1.0


def streak_lengths(covered):
    """Lengths of the maximal runs of miscoverage, a run cut by the end of the sequence included."""
    flags = _flags(covered)
    missed = np.concatenate([[False], ~flags, [False]]).astype(int)
    edges = np.diff(missed)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    return ends - starts


def msl(covered):
    """Mean miscoverage streak length; NaN when nothing was ever miscovered."""
    lengths = streak_lengths(covered)
    if lengths.size == 0:
        return math.nan
    return float(lengths.mean())


def mc_sequence(covered, cap=None):
    """The miscoverage counter MC_t along a coverage sequence."""
    flags = _flags(covered)
    counters = np.empty(flags.size, dtype=float)
    counter = 0

    for index, flag in enumerate(flags):
        counter = 0 if flag else counter + 1
        if cap is not None:
            counter = min(counter, cap)
        counters[index] = counter

    return counters


def mc_risk(covered, cap=None):
    return float(mc_sequence(covered, cap).mean())


def delta_coverage(covered, groups, alpha):
    """Mean over groups of |coverage within the group - (1 - alpha)|, on the 0-1 scale."""
    flags = _flags(covered)
    groups = list(groups)
    if len(groups) != flags.size:
        raise ValueError(f"Got {flags.size} coverage flags but {len(groups)} group labels")

    per_group = pd.Series(flags.astype(float)).groupby(pd.Series(groups, dtype=object), sort=False).mean()
    return float(np.abs(per_group.to_numpy() - (1.0 - alpha)).mean())


def length_summary(lengths, quantiles=LENGTH_QUANTILES):
    """Mean and quantiles of the finite interval lengths (full-space steps are left out)."""
    lengths = np.asarray(lengths, dtype=float)
    finite = lengths[np.isfinite(lengths)]

    if finite.size == 0:
        return math.nan, {str(q): math.nan for q in quantiles}

    return float(finite.mean()), {str(q): float(np.quantile(finite, q)) for q in quantiles}


def full_space_rate(set_sizes):
    sizes = np.asarray(set_sizes, dtype=float)
    if sizes.size == 0:
        raise ValueError("[set_sizes] is empty")
    return float(np.isposinf(sizes).mean())


def endpoint_pinball_loss(labels, set_lo, set_hi, alpha):
    """Pinball loss of the calibrated endpoints as alpha/2 and 1 - alpha/2 quantiles.

    Steps whose set is not a finite interval are skipped; NaN when none is left.
    """
    labels = np.asarray(labels, dtype=float)
    lo = np.asarray(set_lo, dtype=float)
    hi = np.asarray(set_hi, dtype=float)

    usable = np.isfinite(labels) & np.isfinite(lo) & np.isfinite(hi)
    if not usable.any():
        return math.nan

    lower = mean_pinball_loss(labels[usable], lo[usable], alpha=alpha / 2.0)
    upper = mean_pinball_loss(labels[usable], hi[usable], alpha=1.0 - alpha / 2.0)
    return float(lower + upper) / 2.0


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def report_to_dict(report):
    """JSON-compatible view of an EvalReport; NaN and infinities become null."""
    entries = report._asdict()
    entries["length_quantiles"] = {key: _clean(value) for key, value in report.length_quantiles.items()}
    entries["risks"] = [_clean(value) for value in report.risks]
    entries["window"] = list(report.window)
    return {key: _clean(value) for key, value in entries.items()}


def evaluate_trace(trace, window=(None, None), alpha=0.1, mc_cap=None):
    """EvalReport over the records whose step lies in the inclusive window."""
    start, end = window
    selected = trace.window(start, end)
    if not selected.any():
        raise ValueError(f"No trace records fall in the evaluation window {window}")

    frame = trace.to_frame()[selected]
    covered = frame["covered"].to_numpy()
    sizes = frame["set_size"].to_numpy(dtype=float)
    steps = frame["step"].to_numpy()

    groups = frame["group"].tolist()
    if all(group is None for group in groups):
        delta = math.nan
    else:
        delta = delta_coverage(covered, ["" if group is None else group for group in groups], alpha)

    mean_length, quantiles = length_summary(sizes)

    return EvalReport(
        coverage=float(frame["coverage"].mean()),
        mc_risk=mc_risk(covered, mc_cap),
        msl=msl(covered),
        delta_coverage=delta,
        mean_length=mean_length,
        length_quantiles=quantiles,
        window=(int(steps[0]), int(steps[-1])),
        full_space_rate=full_space_rate(sizes),
        pinball_loss=endpoint_pinball_loss(frame["label"], frame["set_lo"], frame["set_hi"], alpha),
        risks=[float(value) for value in trace.loss_matrix()[selected].mean(axis=0)],
        steps=int(selected.sum()),
    )
