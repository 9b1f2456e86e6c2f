"""Warm-up standardization of labeled streams."""
import logging
from itertools import islice

import numpy as np
from sklearn.preprocessing import StandardScaler

logger = logging.getLogger(__name__)


def fit_warmup_scaler(rows, names=None):
    """StandardScaler (population std) fitted on the warm-up rows.

    Zero-variance columns are left untouched (neither centered nor scaled).
    """
    rows = np.asarray(rows, dtype=float)
    if rows.ndim == 1:
        rows = rows[:, None]

    scaler = StandardScaler().fit(rows)
    constant = scaler.var_ == 0

    for index in np.flatnonzero(constant):
        name = names[index] if names is not None else f"column {index}"
        logger.warning("Warm-up values of %s are constant; leaving it unscaled", name)

    scaler.mean_[constant] = 0.0
    scaler.scale_[constant] = 1.0
    return scaler


class StandardizedStream:
    """Standardize features (and optionally the label) with statistics of the first `warmup` samples.

    The warm-up samples are buffered, so no sample after them ever influences
    the statistics; they are then replayed standardized, followed by the rest.
    """

    def __init__(self, stream, warmup=8000, standardize_label=True):
        if warmup < 2:
            raise ValueError(f"The warm-up window should hold at least two samples, got {warmup}")

        self.stream = iter(stream)
        self.warmup = warmup
        self.standardize_label = standardize_label
        self.feature_scaler = None
        self.label_scaler = None
        self.warmup_labels = None

    def _transform(self, sample):
        x, y = sample[0], sample[1]
        x = self.feature_scaler.transform(np.atleast_2d(np.asarray(x, dtype=float)))[0]
        if self.label_scaler is not None:
            y = float(self.label_scaler.transform([[y]])[0, 0])
        return (x, y) + tuple(sample[2:])

    def __iter__(self):
        buffered = list(islice(self.stream, self.warmup))
        if len(buffered) < self.warmup:
            raise ValueError(f"The stream ended after {len(buffered)} samples, before the {self.warmup}-sample warm-up")

        self.feature_scaler = fit_warmup_scaler([sample[0] for sample in buffered])
        labels = np.array([sample[1] for sample in buffered], dtype=float)
        if self.standardize_label:
            self.label_scaler = fit_warmup_scaler(labels, names=["label"])
            labels = self.label_scaler.transform(labels[:, None])[:, 0]
        self.warmup_labels = labels

        for sample in buffered:
            yield self._transform(sample)
        for sample in self.stream:
            yield self._transform(sample)
