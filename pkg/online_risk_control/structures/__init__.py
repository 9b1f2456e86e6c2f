"""Structures shared by the calibration algorithms.

PredictionSet family: Interval, LabelSet, IntervalGrid, EMPTY_SET, FULL_SPACE
RiskSpec / MultiRiskSpec: targets, step sizes, safeguards and loss bounds
CalibratorState: the whole mutable state of one calibrated stream
StreamTrace: per-step record used by metrics and certificates
"""

from .prediction_sets import (EMPTY_SET, FULL_SPACE, EmptySet, FullSpace, Interval, IntervalGrid, LabelSet,
                              PredictionSet, make_interval)
from .risk_spec import CalibratorState, MultiRiskSpec, RiskSpec
from .stream_trace import StreamTrace

__all__ = ["PredictionSet", "Interval", "LabelSet", "IntervalGrid", "EmptySet", "FullSpace", "EMPTY_SET",
           "FULL_SPACE", "make_interval", "RiskSpec", "MultiRiskSpec", "CalibratorState", "StreamTrace"]
