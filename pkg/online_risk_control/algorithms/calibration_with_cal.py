"""Calibration with a rolling window of conformity scores (the ACI-style baseline).

The set keeps every y whose score is at most the empirical (1 - alpha_t)
quantile of the n most recent scores, and alpha_t moves by
gamma * (alpha - err_t). Recorded as theta = -alpha_t this is a rolling risk
control of the 0-1 loss at r = alpha with safeguards m = -1 and M = 0.
"""
import logging
import math
from collections import deque, namedtuple

from ..constructors.intervals import cqr_interval, cqr_score
from ..losses import binary_loss
from ..structures import EMPTY_SET, FULL_SPACE, RiskSpec, StreamTrace
from .rolling_risk_control import unpack_sample

logger = logging.getLogger(__name__)

QUANTILE_ORDERS = ("smallest", "largest")

AciState = namedtuple("AciState", ["alpha_t", "window"])


class ScoreWindow:
    """FIFO of the n most recent conformity scores; the oldest score leaves first."""

    def __init__(self, capacity):
        if capacity < 1:
            raise ValueError(f"The score window capacity should be at least 1, got {capacity}")
        self.capacity = capacity
        self.scores = deque(maxlen=capacity)

    def __len__(self):
        return len(self.scores)

    def push(self, score):
        self.scores.append(float(score))


def initial_aci_state(alpha, window_size):
    return AciState(alpha_t=alpha, window=ScoreWindow(window_size))


def empirical_quantile(window, level, order="smallest"):
    """The ceil(level * (n + 1))-th smallest score, +inf once that index passes n.

    order="largest" counts from the top instead, a literal reading kept for comparison.
    """
    n = len(window)
    if n == 0:
        raise ValueError("The empirical quantile of an empty score window is undefined")
    if order not in QUANTILE_ORDERS:
        raise ValueError(f"Unknown quantile order [{order}], expected one of {QUANTILE_ORDERS}")

    rank = math.ceil(level * (n + 1))
    if rank > n:
        return math.inf
    rank = max(rank, 1)

    ordered = sorted(window.scores, reverse=(order == "largest"))
    return ordered[rank - 1]


def aci_step(state, x, y, model, gamma, alpha, taus=None, warmup=10, order="smallest"):
    """One construct / reveal / update / fit step; returns (set, new state).

    While fewer than `warmup` scores are stored the set is the full space and
    alpha_t stays put.
    """
    tau_lo, tau_hi = taus if taus is not None else (alpha / 2.0, 1.0 - alpha / 2.0)
    q_lo = model.predict(x, tau_lo)
    q_hi = model.predict(x, tau_hi)
    window = state.window

    if len(window) < max(warmup, 1):
        prediction_set = FULL_SPACE
        alpha_next = state.alpha_t
    else:
        if state.alpha_t > 1.0:
            prediction_set = EMPTY_SET
        else:
            prediction_set = cqr_interval(q_lo, q_hi, empirical_quantile(window, 1.0 - state.alpha_t, order))
        err = binary_loss(y, prediction_set)
        alpha_next = state.alpha_t + gamma * (alpha - err)

    window.push(cqr_score(q_lo, q_hi, y))
    model.update(x, y)

    return prediction_set, AciState(alpha_t=alpha_next, window=window)


def aci_risk_spec(alpha, gamma):
    """The rolling risk control view of the baseline, used for its certificates."""
    return RiskSpec(r=alpha, gamma=gamma, m=-1.0, M=0.0, B=1.0, theta_init=-alpha)


def run_calibration_with_cal(stream, model, alpha, gamma, window_size=500, warmup=10, order="smallest",
                             start_step=1, taus=None):
    """Run the baseline over a stream; warm-up steps are not recorded."""
    state = initial_aci_state(alpha, window_size)
    trace = StreamTrace(num_risks=1)

    for offset, sample in enumerate(stream):
        x, y, group = unpack_sample(sample)
        warming_up = len(state.window) < max(warmup, 1)
        alpha_pre = state.alpha_t

        prediction_set, state = aci_step(state, x, y, model, gamma, alpha, taus=taus, warmup=warmup, order=order)

        if warming_up:
            continue

        loss = binary_loss(y, prediction_set)
        trace.record(start_step + offset, loss, -alpha_pre, -state.alpha_t, prediction_set, 1.0 - loss, group,
                     float(y))

    logger.debug("calibration with cal finished at alpha_t = %.4f", state.alpha_t)
    return trace
