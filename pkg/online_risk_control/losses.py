"""Bounded losses L(y, C) for the calibration loop.

Every loss here satisfies L(y, FullSpace) = 0 and L(y, EmptySet) >= 1, so any
target 0 < r < 1 meets the contract L(y, FullSpace) < r < L(y, EmptySet) the
risk guarantee depends on.
"""
from collections import namedtuple

import numpy as np

from .helpers import validate_in_range
from .structures import EmptySet, FullSpace, IntervalGrid, LabelSet, PredictionSet

LOSS_KINDS = ("binary", "mc", "image_miscoverage", "center_failure")

LossSpec = namedtuple("LossSpec", ["kind", "B", "mc_cap", "center_region", "center_threshold"])
LossSpec.__new__.__defaults__ = (1.0, 50, None, 0.6)

# Length of the current run of consecutive miscoverage events.
McState = namedtuple("McState", ["counter"])


def _scalar_coverage(y, prediction_set):
    if isinstance(prediction_set, IntervalGrid):
        raise ValueError("A per-pixel interval grid needs an image loss, not a scalar-label loss")

    if not isinstance(prediction_set, PredictionSet):
        raise ValueError(f"Expected a prediction set, got {type(prediction_set).__name__}")

    if np.ndim(y) != 0:
        raise ValueError(f"Expected a scalar label, got an array of shape {np.shape(y)}")

    if isinstance(prediction_set, LabelSet) and float(y) != int(y):
        raise ValueError(f"Label set needs an integer class label, got {y}")

    return prediction_set.coverage(y)


def binary_loss(y, prediction_set):
    """0-1 miscoverage: 1 if y is outside the set, else 0."""
    return 1.0 - _scalar_coverage(y, prediction_set)


def mc_loss(state, y, prediction_set, mc_cap=None):
    """Miscoverage counter: MC_t = MC_{t-1} + 1 on miscoverage, 0 on coverage (capped at mc_cap)."""
    if _scalar_coverage(y, prediction_set) == 1.0:
        counter = 0
    else:
        counter = state.counter + 1

    if mc_cap is not None:
        counter = min(counter, mc_cap)

    return float(counter), McState(counter)


def _valid_mask(shape, mask):
    if mask is None:
        return np.ones(shape, dtype=bool)

    mask = np.asarray(mask, dtype=bool)
    if mask.shape != shape:
        raise ValueError(f"Valid-pixel mask shape {mask.shape} does not match the label grid {shape}")
    return mask


def image_miscoverage(y, prediction_set, mask=None):
    """Ratio of valid pixels whose true value escapes its interval."""
    y = np.asarray(y, dtype=float)
    mask = _valid_mask(y.shape, mask)

    if not mask.any():
        raise ValueError("Image miscoverage needs at least one valid pixel")

    if isinstance(prediction_set, FullSpace):
        return 0.0
    if isinstance(prediction_set, EmptySet):
        return 1.0
    if not isinstance(prediction_set, IntervalGrid):
        raise ValueError(f"Image miscoverage needs an interval grid, got {prediction_set!r}")

    return 1.0 - prediction_set.coverage(y, mask)


def default_center_region(shape):
    """Middlemost 50x50 block, or the middle half of each dimension on smaller grids.

    Returns (row_start, row_stop, col_start, col_stop).
    """
    region = []
    for extent in shape:
        width = 50 if extent >= 50 else max(extent // 2, 1)
        start = (extent - width) // 2
        region.extend([start, start + width])
    return tuple(region)


def center_failure(y, prediction_set, spec, mask=None):
    """1 if the covered fraction inside the center region is at most the threshold, else 0."""
    y = np.asarray(y, dtype=float)
    mask = _valid_mask(y.shape, mask)
    row_start, row_stop, col_start, col_stop = spec.center_region or default_center_region(y.shape)

    if not (0 <= row_start < row_stop <= y.shape[0] and 0 <= col_start < col_stop <= y.shape[1]):
        raise ValueError(f"Center region {spec.center_region} does not fit an image of shape {y.shape}")

    center_mask = np.zeros(y.shape, dtype=bool)
    center_mask[row_start:row_stop, col_start:col_stop] = True
    center_mask &= mask

    if not center_mask.any():
        raise ValueError("The center region has no valid pixel")

    if isinstance(prediction_set, FullSpace):
        covered_fraction = 1.0
    elif isinstance(prediction_set, EmptySet):
        covered_fraction = 0.0
    elif isinstance(prediction_set, IntervalGrid):
        covered_fraction = prediction_set.coverage(y, center_mask)
    else:
        raise ValueError(f"Center failure needs an interval grid, got {prediction_set!r}")

    return 1.0 if covered_fraction <= spec.center_threshold else 0.0


class LossFunction:
    """Stateful wrapper around one loss kind.

    Attributes:
        bound (float): B, the loss never leaves [-B, B]
        full_space_value (float): L(y, FullSpace)
        empty_set_value (float): smallest possible L(y, EmptySet)
    """

    full_space_value = 0.0
    empty_set_value = 1.0

    def __init__(self, spec, mask=None):
        self.spec = spec
        self.mask = mask
        self.bound = float(spec.B)

    def __call__(self, y, prediction_set):
        raise NotImplementedError

    def coverage(self, y, prediction_set):
        """Covered fraction of the outcome, the trace's coverage column."""
        if isinstance(prediction_set, IntervalGrid) or np.ndim(y) > 0:
            return 1.0 - image_miscoverage(y, prediction_set, self.mask)
        return prediction_set.coverage(y)

    def contract_holds(self, r):
        return self.full_space_value < r < self.empty_set_value

    def reset(self):
        pass


class BinaryLoss(LossFunction):
    def __call__(self, y, prediction_set):
        return binary_loss(y, prediction_set)


class MiscoverageCounterLoss(LossFunction):
    def __init__(self, spec, mask=None):
        super().__init__(spec, mask)
        if spec.mc_cap is not None:
            self.bound = float(spec.mc_cap)
        self.state = McState(0)

    def __call__(self, y, prediction_set):
        value, self.state = mc_loss(self.state, y, prediction_set, self.spec.mc_cap)
        return value

    def reset(self):
        self.state = McState(0)


class ImageMiscoverageLoss(LossFunction):
    def __call__(self, y, prediction_set):
        return image_miscoverage(y, prediction_set, self.mask)


class CenterFailureLoss(LossFunction):
    def __call__(self, y, prediction_set):
        return center_failure(y, prediction_set, self.spec, self.mask)


LOSS_CLASSES = {
    "binary": BinaryLoss,
    "mc": MiscoverageCounterLoss,
    "image_miscoverage": ImageMiscoverageLoss,
    "center_failure": CenterFailureLoss,
}


def build_loss(spec, mask=None):
    """Instantiate the loss described by a LossSpec."""
    if spec.kind not in LOSS_CLASSES:
        raise ValueError(f"Unknown loss kind [{spec.kind}], expected one of {LOSS_KINDS}")

    validate_in_range(spec.center_threshold, "center threshold", 0, 1, closed=False)

    return LOSS_CLASSES[spec.kind](spec, mask)
