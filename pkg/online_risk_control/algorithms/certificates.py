"""Deterministic risk-bound checks computed from traces alone.

Each check returns a Certificate. `guaranteed` is False when the loss
contract L(y, FullSpace) < r < L(y, EmptySet) cannot hold, in which case a
failed check is reported but not counted as a violation.
"""
from collections import namedtuple

import numpy as np

# Numerical slack for comparing accumulated floating point sums against the bounds
TOLERANCE = 1e-9

Certificate = namedtuple("Certificate", ["name", "passed", "guaranteed", "worst_slack"])


def certificate_failed(certificate):
    return certificate.guaranteed and not certificate.passed


def _coordinates(spec):
    """(r, gamma, m, M, B) as length-k arrays for both single and multi-risk specs."""
    return tuple(np.atleast_1d(np.asarray(getattr(spec, name), dtype=float))
                 for name in ("r", "gamma", "m", "M", "B"))


def check_theta_bounds(trace, spec, guaranteed=True, two_sided=True):
    """Every theta stays in [m - 2 gamma B, M + 2 gamma B] (the lower side only when two_sided)."""
    _, gamma, m, M, B = _coordinates(spec)
    thetas = np.vstack([trace.theta_pre_matrix(), trace.theta_post_matrix()])

    if thetas.size == 0:
        return Certificate("theta_bounds", True, guaranteed, np.inf)

    slack = (M + 2.0 * gamma * B) - thetas
    if two_sided:
        slack = np.minimum(slack, thetas - (m - 2.0 * gamma * B))

    worst = float(slack.min())
    return Certificate("theta_bounds", worst >= -TOLERANCE, guaranteed, worst)


def _prefix_means(trace):
    losses = trace.loss_matrix()
    horizons = np.arange(1, losses.shape[0] + 1, dtype=float)[:, None]
    return np.cumsum(losses, axis=0) / horizons, horizons


def check_risk_bound(trace, spec, guaranteed=True, name="risk_bound"):
    """|mean loss over the first T steps - r| <= max{theta_1 - m', M' - theta_1} / (T gamma) for every T."""
    if len(trace) == 0:
        return Certificate(name, True, guaranteed, np.inf)

    r, gamma, m, M, B = _coordinates(spec)
    lower = m - 2.0 * gamma * B
    upper = M + 2.0 * gamma * B
    theta_1 = trace.theta_pre_matrix()[0]

    means, horizons = _prefix_means(trace)
    bound = np.maximum(theta_1 - lower, upper - theta_1) / (horizons * gamma)
    worst = float((bound - np.abs(means - r)).min())

    return Certificate(name, worst >= -TOLERANCE, guaranteed, worst)


def check_upper_risk_bound(trace, spec, guaranteed=True):
    """mean loss over the first T steps <= r + (M' - theta_1) / (T gamma) for every risk and T."""
    if len(trace) == 0:
        return Certificate("upper_risk_bound", True, guaranteed, np.inf)

    r, gamma, _, M, B = _coordinates(spec)
    upper = M + 2.0 * gamma * B
    theta_1 = trace.theta_pre_matrix()[0]

    means, horizons = _prefix_means(trace)
    bound = r + (upper - theta_1) / (horizons * gamma)
    worst = float((bound - means).min())

    return Certificate("upper_risk_bound", worst >= -TOLERANCE, guaranteed, worst)


def check_two_sided_risk_bound(trace, spec, guaranteed=True):
    """Two-sided per-risk bound, valid when the constructor also empties below every m."""
    return check_risk_bound(trace, spec, guaranteed, name="two_sided_risk_bound")
