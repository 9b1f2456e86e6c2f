"""Stretching functions phi mapping theta to the effective set adjustment.

The adaptive kinds keep an additive state lambda, updated once per step from
the previous step's conformity score and loss. apply never touches the
state and update_lambda never reads theta, so the theta recursion (and
every bound derived from it) is the same for all kinds.
"""
from collections import namedtuple

import numpy as np

STRETCH_KINDS = ("none", "exponential", "exp_linear_zone", "score_adaptive", "error_adaptive")
ADAPTIVE_KINDS = ("score_adaptive", "error_adaptive")

# Identity zone half-width of the exp_linear_zone variant
LINEAR_ZONE = 0.1

StretchState = namedtuple("StretchState", ["kind", "beta_score", "beta_loss", "beta_low", "beta_high", "lam"])
StretchState.__new__.__defaults__ = (0.0, 0.0, 0.0, 0.0, 0.0)


def build_stretch(kind="none", beta_score=0.0, beta_loss=0.0, beta_low=0.0, beta_high=0.0):
    """Validate the hyperparameters and return a stretch state with lambda = 0."""
    if kind not in STRETCH_KINDS:
        raise ValueError(f"Unknown stretch kind [{kind}], expected one of {STRETCH_KINDS}")

    if not beta_low <= 0 <= beta_high:
        raise ValueError(f"The clip bounds should satisfy beta_low <= 0 <= beta_high, got ({beta_low}, {beta_high})")

    return StretchState(kind, float(beta_score), float(beta_loss), float(beta_low), float(beta_high), 0.0)


def clip(value, low, high):
    return max(min(value, high), low)


def _exponential(theta):
    # e^x - 1 overflows to +inf for huge theta; the set then covers everything.
    with np.errstate(over="ignore"):
        if theta > 0:
            return float(np.expm1(theta))
        return float(-np.expm1(-theta))


def apply(state, theta):
    """phi(theta) for the given stretch state."""
    kind = state.kind

    if kind == "none":
        return float(theta)

    if kind == "exponential":
        return _exponential(theta)

    if kind == "exp_linear_zone":
        if -LINEAR_ZONE <= theta <= LINEAR_ZONE:
            return float(theta)
        return _exponential(theta)

    if kind in ADAPTIVE_KINDS:
        return float(theta) + state.lam

    raise ValueError(f"Unknown stretch kind [{kind}]")


def update_lambda(state, score, prev_loss, r):
    """Move lambda against the previous conformity score, clipped to [beta_low, beta_high].

    error_adaptive scales the move by exp(beta_loss * |prev_loss - r|); other
    non-adaptive kinds are returned unchanged.
    """
    if state.kind == "score_adaptive":
        step = state.beta_score * score
    elif state.kind == "error_adaptive":
        step = state.beta_score * score * np.exp(state.beta_loss * abs(prev_loss - r))
    else:
        return state

    lam = clip(state.lam - float(step), state.beta_low, state.beta_high)
    return state._replace(lam=lam)


def mean_absolute_change(values):
    """Average |y_t - y_{t-1}| over a warm-up window, the default clip scale for lambda."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise ValueError("At least two warm-up values are needed to estimate the clip scale")
    return float(np.mean(np.abs(np.diff(values))))
