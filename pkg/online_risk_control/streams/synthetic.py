"""Synthetic regression stream with piecewise group shifts.

Time is cut into consecutive groups of about 500 steps. Every group i has a
direction beta_i (uniform, L1-normalized) and a scale omega_i (random on even
groups, 1 on odd ones), and

    Y_t = Y_{t-1} / 2 + omega_{g_t}^2 |beta_{g_t}^T X_t| + 2 sin(2 X_{t,1} eps_t),   Y_0 = 0.

Groups are drawn lazily, so streams of any length need constant memory.
"""
import math
from collections import namedtuple

import numpy as np

SyntheticConfig = namedtuple("SyntheticConfig", [
    "seed", "dimension", "group_mean_length", "group_length_std", "omega_mean", "omega_variance",
    "include_lagged_label", "length",
])
SyntheticConfig.__new__.__defaults__ = (0, 5, 500.0, 10.0, 20.0, 10.0, True, None)


class SyntheticState:
    """Generator plus the current group's parameters and the previous label."""

    def __init__(self, config):
        if config.dimension < 1:
            raise ValueError(f"The feature dimension should be at least 1, got {config.dimension}")

        self.rng = np.random.default_rng(config.seed)
        self.y_prev = 0.0
        self.t = 0
        self.group = 0
        self.remaining = 0
        self.beta = None
        self.omega = None


def synthetic_response(y_prev, omega, beta, x, eps):
    return 0.5 * y_prev + omega ** 2 * abs(float(beta @ x)) + 2.0 * math.sin(2.0 * x[0] * eps)


def _start_next_group(state, config):
    state.group += 1
    state.remaining = max(int(round(state.rng.normal(config.group_mean_length, config.group_length_std))), 1)

    raw_beta = state.rng.uniform(0.0, 1.0, size=config.dimension)
    state.beta = raw_beta / np.abs(raw_beta).sum()

    if state.group % 2 == 0:
        state.omega = float(state.rng.normal(config.omega_mean, math.sqrt(config.omega_variance)))
    else:
        state.omega = 1.0


def synthetic_next(state, config):
    """Advance the stream by one step; returns (features, label, group id).

    The features are X_t, followed by Y_{t-1} when include_lagged_label is set.
    """
    if state.remaining == 0:
        _start_next_group(state, config)

    x = state.rng.uniform(0.0, 1.0, size=config.dimension)
    eps = float(state.rng.normal())
    y = synthetic_response(state.y_prev, state.omega, state.beta, x, eps)

    features = np.append(x, state.y_prev) if config.include_lagged_label else x

    state.y_prev = y
    state.remaining -= 1
    state.t += 1

    return features, y, state.group


def synthetic_stream(config):
    """Iterate (features, label, group) for config.length steps (forever when length is None)."""
    state = SyntheticState(config)
    while config.length is None or state.t < config.length:
        yield synthetic_next(state, config)
