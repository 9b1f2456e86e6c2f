"""Interval constructors for scalar regression."""
import math

from ..helpers import validate_in_range
from ..structures import FULL_SPACE, make_interval
from .base import SetConstructor


def cqr_interval(q_lo, q_hi, adj):
    """[q_lo - adj, q_hi + adj], or the empty set once the interval inverts."""
    for name, value in (("lower quantile", q_lo), ("upper quantile", q_hi), ("adjustment", adj)):
        if math.isnan(value) or (name != "adjustment" and not math.isfinite(value)):
            raise ValueError(f"The {name} should be finite, got {value}")

    if adj == math.inf:
        return FULL_SPACE

    return make_interval(q_lo - adj, q_hi + adj)


def cqr_score(q_lo, q_hi, y):
    """Signed distance of y to the nearer interval endpoint, negative inside."""
    return max(q_lo - y, y - q_hi)


def quantile_scale_interval(model, x, theta):
    """[q(tau/2), q(1 - tau/2)] with tau = -theta clipped to (0, 1]; tau -> 0 is the whole line."""
    tau = min(-theta, 1.0)
    # residues like theta = -1e-17 put the upper level at exactly 1.0
    if tau <= 0 or 1.0 - tau / 2.0 == 1.0:
        return FULL_SPACE

    lo = model.predict(x, tau / 2.0)
    hi = model.predict(x, 1.0 - tau / 2.0)
    if math.isinf(lo) or math.isinf(hi):
        return FULL_SPACE
    return cqr_interval(lo, hi, 0.0)


class CQRConstructor(SetConstructor):
    """Value-scale intervals around the model's alpha/2 and 1 - alpha/2 quantiles."""

    supports_score = True

    def __init__(self, alpha=0.1):
        validate_in_range(alpha, "nominal miscoverage alpha", 0, 1, closed=False)
        self.alpha = alpha
        self.tau_lo = alpha / 2.0
        self.tau_hi = 1.0 - alpha / 2.0

    def quantiles(self, model, x):
        return model.predict(x, self.tau_lo), model.predict(x, self.tau_hi)

    def construct(self, model, x, adjustment):
        q_lo, q_hi = self.quantiles(model, x)
        return cqr_interval(q_lo, q_hi, adjustment)

    def score(self, model, x, y):
        q_lo, q_hi = self.quantiles(model, x)
        return cqr_score(q_lo, q_hi, y)


class QuantileScaleConstructor(SetConstructor):
    """Calibrates the miscoverage level of the quantile queries themselves; phi(theta) = -theta is fixed."""

    def adjustment(self, theta, stretch):
        if stretch.kind != "none":
            raise ValueError("The quantile-scale constructor uses its own fixed stretching; set stretch kind to none")
        return theta

    def construct(self, model, x, adjustment):
        return quantile_scale_interval(model, x, adjustment)
