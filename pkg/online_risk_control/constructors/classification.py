"""Label-set constructors for K-class classification.

Both constructors read theta on the miscoverage scale (theta near -alpha):
the threshold set keeps labels with probability >= -phi(theta), the
cumulative set keeps the most probable labels until their mass reaches
1 + phi(theta). Larger theta gives larger sets in both.
"""
import numpy as np

from ..structures import EMPTY_SET, FULL_SPACE, LabelSet
from .base import SetConstructor

PROBABILITY_TOLERANCE = 1e-6


def validate_probabilities(probs):
    probs = np.asarray(probs, dtype=float)

    if probs.ndim != 1 or probs.size == 0:
        raise ValueError(f"Expected a non-empty probability vector, got shape {probs.shape}")
    if not np.all(np.isfinite(probs)) or np.any(probs < 0):
        raise ValueError("Class probabilities should be finite and nonnegative")
    if abs(probs.sum() - 1.0) > PROBABILITY_TOLERANCE:
        raise ValueError(f"Class probabilities should sum to 1, got {probs.sum()}")

    return probs


def class_threshold_set(probs, thr):
    """All labels (1-based) whose probability is at least thr."""
    probs = validate_probabilities(probs)

    if thr <= 0:
        return FULL_SPACE
    if thr > 1:
        return EMPTY_SET

    members = np.flatnonzero(probs >= thr) + 1
    if members.size == 0:
        return EMPTY_SET
    return LabelSet(members, probs.size)


def class_cumulative_set(probs, level):
    """Smallest most-probable-first prefix of labels with total mass >= level.

    Ties in probability are broken by ascending label index.
    """
    probs = validate_probabilities(probs)

    if level <= 0:
        return EMPTY_SET
    if level > 1:
        return FULL_SPACE

    order = sorted(range(probs.size), key=lambda label: (-probs[label], label))
    cumulative = np.cumsum(probs[order])
    reached = np.flatnonzero(cumulative >= level)
    # rounding may leave the total mass a hair below a level of 1
    prefix = reached[0] + 1 if reached.size else probs.size

    return LabelSet(np.asarray(order[:prefix]) + 1, probs.size)


class ClassThresholdConstructor(SetConstructor):
    output_kind = "probabilities"

    def construct(self, model, x, adjustment):
        return class_threshold_set(model.predict_proba(x), -adjustment)


class ClassCumulativeConstructor(SetConstructor):
    output_kind = "probabilities"

    def construct(self, model, x, adjustment):
        level = min(max(1.0 + adjustment, 0.0), 1.0)
        return class_cumulative_set(model.predict_proba(x), level)
