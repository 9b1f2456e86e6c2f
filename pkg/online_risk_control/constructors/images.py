"""Per-pixel intervals for image-to-image regression.

An uncertainty heuristic supplies nonnegative lower/upper maps l and u; the
interval at each pixel is [pred - lambda * l, pred + lambda * u].
"""
import math
from collections import deque

import numpy as np

from ..structures import EMPTY_SET, FULL_SPACE, IntervalGrid
from .base import SetConstructor

HEURISTIC_KINDS = ("constant", "residual_model", "previous_residuals")


def image_interval(pred, l_map, u_map, lam):
    pred = np.asarray(pred, dtype=float)
    l_map = np.asarray(l_map, dtype=float)
    u_map = np.asarray(u_map, dtype=float)

    if not (pred.shape == l_map.shape == u_map.shape):
        raise ValueError(f"Shape mismatch: prediction {pred.shape}, lower map {l_map.shape}, upper map {u_map.shape}")
    if np.any(l_map < 0) or np.any(u_map < 0):
        raise ValueError("Uncertainty maps should be nonnegative")
    if math.isnan(lam):
        raise ValueError("The interval scale lambda should not be NaN")

    # inf * 0 is undefined, so overflowed stretches map straight to the extreme sets
    if lam == math.inf:
        return FULL_SPACE
    if lam == -math.inf:
        return EMPTY_SET

    return IntervalGrid(pred - lam * l_map, pred + lam * u_map)


class ConstantHeuristic:
    """Same uncertainty everywhere."""
    kind = "constant"

    def __init__(self, value=1.0):
        if value < 0:
            raise ValueError(f"The constant uncertainty should be nonnegative, got {value}")
        self.value = float(value)

    def maps(self, shape):
        constant = np.full(shape, self.value)
        return constant, constant

    def update(self, pred, y):
        return self


class ResidualMagnitudeHeuristic:
    """Running estimate of |pred - y| per pixel, used symmetrically for both directions.

    An exponentially weighted mean stands in for a learned residual network;
    initial_value is used until the first frame arrives.
    """
    kind = "residual_model"

    def __init__(self, decay=0.9, initial_value=1.0):
        if not 0 <= decay < 1:
            raise ValueError(f"The decay should be in [0, 1), got {decay}")
        self.decay = decay
        self.initial_value = initial_value
        self.estimate = None

    def maps(self, shape):
        if self.estimate is None:
            constant = np.full(shape, self.initial_value)
            return constant, constant
        return self.estimate, self.estimate

    def update(self, pred, y):
        residual = np.abs(np.asarray(pred, dtype=float) - np.asarray(y, dtype=float))
        if self.estimate is None:
            self.estimate = residual
        else:
            self.estimate = self.decay * self.estimate + (1.0 - self.decay) * residual
        return self


class PreviousResidualsHeuristic:
    """Mean positive and negative residuals over the last `window` frames.

    l averages max(pred - y, 0) (prediction above the truth), u averages
    max(y - pred, 0). Before the first frame both maps are ones.
    """
    kind = "previous_residuals"

    def __init__(self, window=5):
        if window < 1:
            raise ValueError(f"The residual window should hold at least one frame, got {window}")
        self.window = window
        self.positive = deque(maxlen=window)
        self.negative = deque(maxlen=window)

    def maps(self, shape):
        if not self.positive:
            ones = np.ones(shape)
            return ones, ones
        return np.mean(self.positive, axis=0), np.mean(self.negative, axis=0)

    def update(self, pred, y):
        difference = np.asarray(pred, dtype=float) - np.asarray(y, dtype=float)
        self.positive.append(np.maximum(difference, 0.0))
        self.negative.append(np.maximum(-difference, 0.0))
        return self


def build_heuristic(kind="previous_residuals", **parameters):
    if kind == "constant":
        return ConstantHeuristic(**parameters)
    if kind == "residual_model":
        return ResidualMagnitudeHeuristic(**parameters)
    if kind == "previous_residuals":
        return PreviousResidualsHeuristic(**parameters)
    raise ValueError(f"Unknown uncertainty heuristic [{kind}], expected one of {HEURISTIC_KINDS}")


def heuristic_update(heuristic, pred, y):
    """Push one revealed frame into the heuristic and return it."""
    return heuristic.update(pred, y)


class ImageConstructor(SetConstructor):
    """x is the model's predicted image; the model handle itself is unused."""

    output_kind = "image"

    def __init__(self, heuristic):
        self.heuristic = heuristic

    def construct(self, model, x, adjustment):
        l_map, u_map = self.heuristic.maps(np.shape(x))
        return image_interval(x, l_map, u_map, adjustment)

    def update(self, x, y):
        self.heuristic.update(x, y)
