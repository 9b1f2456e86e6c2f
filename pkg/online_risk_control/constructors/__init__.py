"""Set constructing functions f(x, theta, model).

CQRConstructor: value-scale conformalized quantile intervals
QuantileScaleConstructor: intervals from quantile queries at a calibrated level
ClassThresholdConstructor / ClassCumulativeConstructor: classification label sets
ImageConstructor: per-pixel intervals from an uncertainty heuristic
"""
from .base import SetConstructor
from .classification import (ClassCumulativeConstructor, ClassThresholdConstructor, class_cumulative_set,
                             class_threshold_set, validate_probabilities)
from .images import (HEURISTIC_KINDS, ConstantHeuristic, ImageConstructor, PreviousResidualsHeuristic,
                     ResidualMagnitudeHeuristic, build_heuristic, heuristic_update, image_interval)
from .intervals import CQRConstructor, QuantileScaleConstructor, cqr_interval, cqr_score, quantile_scale_interval

__all__ = ["SetConstructor", "CQRConstructor", "QuantileScaleConstructor", "ClassThresholdConstructor",
           "ClassCumulativeConstructor", "ImageConstructor", "ConstantHeuristic", "ResidualMagnitudeHeuristic",
           "PreviousResidualsHeuristic", "HEURISTIC_KINDS", "build_heuristic", "heuristic_update", "image_interval",
           "cqr_interval", "cqr_score", "quantile_scale_interval", "class_threshold_set", "class_cumulative_set",
           "validate_probabilities"]
