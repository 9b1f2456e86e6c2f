"""Calibration algorithms.

rolling_risk_control: single-risk theta feedback loop and its bounds
multi_risk_control: vector theta for several simultaneous risks
calibration_with_cal: rolling conformity-score window baseline
stretching: phi functions and their lambda state
certificates: risk-bound checks recomputed from traces
"""
from .certificates import (Certificate, certificate_failed, check_risk_bound, check_theta_bounds,
                           check_two_sided_risk_bound, check_upper_risk_bound)
from .multi_risk_control import MultiRiskController, aggregate, run_multi_stream, update_vector
from .rolling_risk_control import (RollingRiskController, prefix_risk_bound, risk_bound, run_stream,
                                   safeguarded_construct, update_theta)
from .stretching import StretchState, build_stretch

__all__ = ["RollingRiskController", "run_stream", "update_theta", "safeguarded_construct", "risk_bound",
           "prefix_risk_bound", "MultiRiskController", "run_multi_stream", "update_vector", "aggregate",
           "StretchState", "build_stretch", "Certificate", "certificate_failed", "check_theta_bounds",
           "check_risk_bound", "check_upper_risk_bound", "check_two_sided_risk_bound"]
