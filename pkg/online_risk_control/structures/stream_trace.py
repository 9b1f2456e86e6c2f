"""Per-step record of a calibrated stream."""
import math

import numpy as np
import pandas as pd


class StreamTrace:
    """Everything needed to compute metrics and re-check the risk bounds after a run.

    Attributes:
        num_risks (int): number of controlled risks k (1 for single-risk control)
        steps (list): global step index of each record (1-based)
        losses, theta_pre, theta_post (list): one length-k tuple per step
        set_lo, set_hi, set_size (list): envelope and size statistic of the announced set
        coverage (list): covered fraction of the outcome (0/1 for scalar labels)
        groups, labels (list): group id (for per-group coverage) and scalar label (NaN for images)
    """

    def __init__(self, num_risks=1):
        if num_risks < 1:
            raise ValueError("A trace should record at least one risk")

        self.num_risks = num_risks
        self.steps = []
        self.losses = []
        self.theta_pre = []
        self.theta_post = []
        self.set_lo = []
        self.set_hi = []
        self.set_size = []
        self.coverage = []
        self.groups = []
        self.labels = []

    def __len__(self):
        return len(self.steps)

    def record(self, step, losses, theta_pre, theta_post, prediction_set, coverage, group=None, label=math.nan,
               set_size=None):
        losses = tuple(float(value) for value in np.atleast_1d(losses))
        theta_pre = tuple(float(value) for value in np.atleast_1d(theta_pre))
        theta_post = tuple(float(value) for value in np.atleast_1d(theta_post))

        for name, values in (("losses", losses), ("theta_pre", theta_pre), ("theta_post", theta_post)):
            if len(values) != self.num_risks:
                raise ValueError(f"Expected {self.num_risks} {name} per step, got {len(values)}")

        lo, hi = prediction_set.bounds()

        self.steps.append(int(step))
        self.losses.append(losses)
        self.theta_pre.append(theta_pre)
        self.theta_post.append(theta_post)
        self.set_lo.append(float(lo))
        self.set_hi.append(float(hi))
        self.set_size.append(float(prediction_set.size() if set_size is None else set_size))
        self.coverage.append(float(coverage))
        self.groups.append(group)
        self.labels.append(float(label))

    def loss_matrix(self):
        return np.asarray(self.losses, dtype=float).reshape(len(self), self.num_risks)

    def theta_pre_matrix(self):
        return np.asarray(self.theta_pre, dtype=float).reshape(len(self), self.num_risks)

    def theta_post_matrix(self):
        return np.asarray(self.theta_post, dtype=float).reshape(len(self), self.num_risks)

    def covered(self):
        return np.asarray(self.coverage, dtype=float) == 1.0

    def window(self, start=None, end=None):
        """Boolean mask selecting records whose global step lies in [start, end]."""
        steps = np.asarray(self.steps, dtype=int)
        selected = np.ones(len(steps), dtype=bool)
        if start is not None:
            selected &= steps >= start
        if end is not None:
            selected &= steps <= end
        return selected

    def _risk_columns(self, prefix):
        if self.num_risks == 1:
            return [prefix]
        return [f"{prefix}_{index + 1}" for index in range(self.num_risks)]

    def to_frame(self):
        """Flat table, one row per step, in the fixed export column order."""
        columns = {"step": np.asarray(self.steps, dtype=int)}
        for prefix, matrix in (("loss", self.loss_matrix()), ("theta_pre", self.theta_pre_matrix()),
                               ("theta_post", self.theta_post_matrix())):
            for index, column in enumerate(self._risk_columns(prefix)):
                columns[column] = matrix[:, index]

        columns["set_lo"] = np.asarray(self.set_lo, dtype=float)
        columns["set_hi"] = np.asarray(self.set_hi, dtype=float)
        columns["set_size"] = np.asarray(self.set_size, dtype=float)
        columns["covered"] = self.covered().astype(int)
        columns["coverage"] = np.asarray(self.coverage, dtype=float)
        columns["group"] = pd.Series(self.groups, dtype=object)
        columns["label"] = np.asarray(self.labels, dtype=float)

        return pd.DataFrame(columns)

    @classmethod
    def from_frame(cls, frame):
        loss_columns = [column for column in frame.columns if column == "loss" or column.startswith("loss_")]
        trace = cls(num_risks=len(loss_columns))

        losses = frame[trace._risk_columns("loss")].to_numpy(dtype=float)
        theta_pre = frame[trace._risk_columns("theta_pre")].to_numpy(dtype=float)
        theta_post = frame[trace._risk_columns("theta_post")].to_numpy(dtype=float)

        trace.steps = [int(step) for step in frame["step"]]
        trace.losses = [tuple(row) for row in losses.tolist()]
        trace.theta_pre = [tuple(row) for row in theta_pre.tolist()]
        trace.theta_post = [tuple(row) for row in theta_post.tolist()]
        trace.set_lo = frame["set_lo"].astype(float).tolist()
        trace.set_hi = frame["set_hi"].astype(float).tolist()
        trace.set_size = frame["set_size"].astype(float).tolist()
        trace.coverage = frame["coverage"].astype(float).tolist()
        trace.groups = [None if pd.isna(group) else group for group in frame["group"]]
        trace.labels = frame["label"].astype(float).tolist()

        return trace
