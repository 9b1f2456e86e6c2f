"""Simultaneous control of k risks with one theta coordinate per risk.

Each coordinate follows its own rolling update; the constructor receives one
scalar, the mean or max of phi(theta^i). The set is the full space as soon
as any coordinate passes its M, and (in two-sided mode) empty as soon as
any falls below its m; the full space wins when both happen.
"""
import logging
import math

import numpy as np

from ..helpers import LossBoundError
from ..structures import EMPTY_SET, FULL_SPACE, StreamTrace
from .rolling_risk_control import unpack_sample
from .stretching import ADAPTIVE_KINDS, apply, build_stretch

logger = logging.getLogger(__name__)


def update_vector(theta, losses, spec):
    """theta^i + gamma^i * (loss^i - r^i) for every coordinate."""
    theta = np.asarray(theta, dtype=float)
    losses = np.asarray(losses, dtype=float)

    if theta.shape != (spec.k,) or losses.shape != (spec.k,):
        raise ValueError(f"Expected {spec.k} thetas and losses, got {theta.shape} and {losses.shape}")

    if not np.all(np.isfinite(losses)) or np.any(np.abs(losses) > spec.B):
        raise LossBoundError(f"Losses {losses.tolist()} escape their bounds {spec.B.tolist()}")

    return theta + spec.gamma * (losses - spec.r)


def aggregate(theta, stretch, spec):
    """Mean or max over coordinates of phi(theta^i)."""
    stretched = [apply(stretch, value) for value in np.asarray(theta, dtype=float)]

    if spec.aggregation == "max":
        return max(stretched)
    return float(np.mean(stretched))


def multi_safeguarded_construct(x, theta, model, constructor, spec, stretch):
    if np.any(theta > spec.M):
        return FULL_SPACE

    if spec.two_sided and np.any(theta < spec.m):
        return EMPTY_SET

    return constructor.construct(model, x, aggregate(theta, stretch, spec))


class MultiRiskController:
    """Same construct/observe protocol as the single-risk controller, for a list of losses."""

    def __init__(self, model, constructor, losses, spec, stretch=None, trace=None, start_step=1):
        constructor.check_model(model)

        if len(losses) != spec.k:
            raise ValueError(f"The spec controls {spec.k} risks but {len(losses)} losses were given")

        if stretch is None:
            stretch = build_stretch("none")

        if stretch.kind in ADAPTIVE_KINDS:
            raise ValueError(f"Stretch kind [{stretch.kind}] is not supported for multi-risk control")

        for index, loss in enumerate(losses):
            if loss.bound > spec.B[index] + 1e-12:
                raise ValueError(f"Loss {index + 1} can reach {loss.bound}, above its declared bound {spec.B[index]}")
            if not loss.contract_holds(spec.r[index]):
                logger.warning("Target r = %s of risk %d violates the loss contract; its bound is not guaranteed",
                               spec.r[index], index + 1)

        self.model = model
        self.constructor = constructor
        self.losses = losses
        self.spec = spec
        self.stretch = stretch
        self.theta = spec.theta_init.copy()
        self.trace = trace if trace is not None else StreamTrace(num_risks=spec.k)
        self.step = start_step
        self._pending = None

    def construct(self, x):
        if self._pending is not None:
            raise RuntimeError("construct called twice without observing the label in between")

        prediction_set = multi_safeguarded_construct(x, self.theta, self.model, self.constructor, self.spec,
                                                     self.stretch)
        self._pending = (x, prediction_set)
        return prediction_set

    def observe(self, y, group=None):
        if self._pending is None:
            raise RuntimeError("observe called before construct")

        x, prediction_set = self._pending
        self._pending = None

        values = np.array([loss(y, prediction_set) for loss in self.losses])
        coverage = self.losses[0].coverage(y, prediction_set)
        mask = self.losses[0].mask

        theta_pre = self.theta
        self.theta = update_vector(self.theta, values, self.spec)

        label = float(y) if np.ndim(y) == 0 else math.nan
        self.trace.record(self.step, values, theta_pre, self.theta, prediction_set, coverage, group, label,
                          set_size=prediction_set.size(mask) if mask is not None else None)
        self.step += 1

        self.constructor.update(x, y)
        if self.model is not None:
            self.model.update(x, y)

        return values


def run_multi_stream(stream, model, constructor, losses, spec, stretch=None, start_step=1):
    controller = MultiRiskController(model, constructor, losses, spec, stretch, start_step=start_step)

    for sample in stream:
        x, y, group = unpack_sample(sample)
        controller.construct(x)
        controller.observe(y, group)

    return controller.trace
