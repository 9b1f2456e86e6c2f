"""Online base models behind the calibration loop.

LinearPinballModel: linear quantile regressor trained by pinball subgradient steps
GaussianOracleModel: exact conditional quantiles of a stream with known Gaussian noise
ConstantModel: fixed quantile estimates
OnlineSoftmaxClassifier: incremental logistic classifier producing class probabilities
"""
from .base import ModelHandle
from .classifier import OnlineSoftmaxClassifier
from .linear_pinball import LinearPinballModel
from .oracle import ConstantModel, GaussianOracleModel
from .pinball import pinball_gradient, pinball_loss

__all__ = ["ModelHandle", "LinearPinballModel", "GaussianOracleModel", "ConstantModel", "OnlineSoftmaxClassifier",
           "pinball_loss", "pinball_gradient"]
