"""Rolling risk control: the theta feedback loop.

At each step the controller announces a set built from data up to t-1 and
x_t, scores it once y_t is revealed, moves theta by gamma * (loss - r) and
only then lets the model and the constructor learn from (x_t, y_t).
"""
import logging
import math

from ..helpers import LossBoundError
from ..structures import EMPTY_SET, FULL_SPACE, CalibratorState, StreamTrace
from .stretching import ADAPTIVE_KINDS, build_stretch, update_lambda

logger = logging.getLogger(__name__)


def update_theta(state, loss, spec):
    """theta_{t+1} = theta_t + gamma * (loss - r); also advances the step counter and loss sum."""
    if not math.isfinite(loss) or abs(loss) > spec.B:
        raise LossBoundError(f"Loss {loss} is outside [-B, B] = [{-spec.B}, {spec.B}]; check the declared loss bound")

    return CalibratorState(
        theta=state.theta + spec.gamma * (loss - spec.r),
        t=state.t + 1,
        loss_sum=state.loss_sum + loss,
    )


def safeguarded_construct(x, state, model, constructor, spec, stretch=None):
    """Full label space above M, empty set below m, the constructor's set otherwise."""
    if state.theta > spec.M:
        logger.debug("theta %.6g above the upper safeguard, announcing the full space", state.theta)
        return FULL_SPACE

    if state.theta < spec.m:
        logger.debug("theta %.6g below the lower safeguard, announcing the empty set", state.theta)
        return EMPTY_SET

    if stretch is None:
        stretch = build_stretch("none")

    return constructor.construct(model, x, constructor.adjustment(state.theta, stretch))


def risk_bound(spec, T):
    """C / T with C = (M - m + 4 gamma B) / gamma: worst-case gap between the average loss and r."""
    if T < 1:
        raise ValueError(f"The horizon T should be at least 1, got {T}")

    return (spec.M - spec.m + 4.0 * spec.gamma * spec.B) / (spec.gamma * T)


def prefix_risk_bound(spec, theta_1, T):
    """max{theta_1 - m', M' - theta_1} / (T gamma), the sharper bound for a known starting theta."""
    if T < 1:
        raise ValueError(f"The horizon T should be at least 1, got {T}")

    lower, upper = spec.theta_range()
    return max(theta_1 - lower, upper - theta_1) / (T * spec.gamma)


class RollingRiskController:
    """Single-risk calibration of one stream.

    Call construct(x) to get the announced set, then observe(y) to score it.
    Keeping the two calls separate lets an adversary choose y after seeing the set.

    Attributes:
        state (CalibratorState): current theta, step count and loss sum
        stretch (StretchState): stretching function and its lambda
        trace (StreamTrace): one record per observed step
    """

    def __init__(self, model, constructor, loss, spec, stretch=None, trace=None, start_step=1):
        constructor.check_model(model)

        if stretch is None:
            stretch = build_stretch("none")

        if stretch.kind in ADAPTIVE_KINDS and not constructor.supports_score:
            raise ValueError(f"Stretch kind [{stretch.kind}] needs a constructor with a conformity score")

        if loss.bound > spec.B + 1e-12:
            raise ValueError(f"The loss can reach {loss.bound}, above the declared bound B = {spec.B}")

        if not loss.contract_holds(spec.r):
            logger.warning("Target r = %s violates L(y, FullSpace) < r < L(y, EmptySet); "
                           "the risk bound is not guaranteed", spec.r)

        self.model = model
        self.constructor = constructor
        self.loss = loss
        self.spec = spec
        self.stretch = stretch
        self.state = spec.initial_state()
        self.trace = trace if trace is not None else StreamTrace(num_risks=1)
        self.step = start_step

        self._pending = None
        self._previous = None

    def construct(self, x):
        if self._pending is not None:
            raise RuntimeError("construct called twice without observing the label in between")

        if self._previous is not None and self.stretch.kind in ADAPTIVE_KINDS:
            previous_score, previous_loss = self._previous
            self.stretch = update_lambda(self.stretch, previous_score, previous_loss, self.spec.r)

        prediction_set = safeguarded_construct(x, self.state, self.model, self.constructor, self.spec, self.stretch)
        self._pending = (x, prediction_set)
        return prediction_set

    def observe(self, y, group=None):
        """Reveal y for the pending set; returns the loss of that set."""
        if self._pending is None:
            raise RuntimeError("observe called before construct")

        x, prediction_set = self._pending
        self._pending = None

        loss = self.loss(y, prediction_set)
        coverage = self.loss.coverage(y, prediction_set)

        theta_pre = self.state.theta
        self.state = update_theta(self.state, loss, self.spec)

        if self.stretch.kind in ADAPTIVE_KINDS:
            self._previous = (self.constructor.score(self.model, x, y), loss)

        label = float(y) if _is_scalar(y) else math.nan
        self.trace.record(self.step, loss, theta_pre, self.state.theta, prediction_set, coverage, group, label,
                          set_size=prediction_set.size(self.loss.mask) if self.loss.mask is not None else None)
        self.step += 1

        self.constructor.update(x, y)
        if self.model is not None:
            self.model.update(x, y)

        return loss


def _is_scalar(y):
    try:
        float(y)
    except (TypeError, ValueError):
        return False
    return True


def unpack_sample(sample):
    """Stream items are (x, y) or (x, y, group)."""
    if len(sample) == 2:
        x, y = sample
        return x, y, None
    x, y, group = sample[:3]
    return x, y, group


def run_stream(stream, model, constructor, loss, spec, stretch=None, start_step=1):
    """Calibrate a whole labeled stream and return its trace."""
    controller = RollingRiskController(model, constructor, loss, spec, stretch, start_step=start_step)

    for sample in stream:
        x, y, group = unpack_sample(sample)
        controller.construct(x)
        controller.observe(y, group)

    return controller.trace
