"""Prediction sets returned by the set constructing functions.

Every set answers three questions: the fraction of an outcome it covers, a
size statistic and, for the trace, its (lower, upper) envelope.
"""
import math

import numpy as np


class PredictionSet:
    kind = None

    def coverage(self, y, mask=None):
        """Fraction of the outcome covered: 0/1 for scalar labels, pixel ratio for grids."""
        raise NotImplementedError

    def contains(self, y, mask=None):
        return self.coverage(y, mask) == 1.0

    def size(self, mask=None):
        raise NotImplementedError

    def bounds(self):
        return (math.nan, math.nan)


class EmptySet(PredictionSet):
    """The set returned below the lower safeguard; covers nothing."""
    kind = "empty"

    def coverage(self, y, mask=None):
        return 0.0

    def size(self, mask=None):
        return 0.0

    def __repr__(self):
        return "EmptySet"


class FullSpace(PredictionSet):
    """The whole label space, returned above the upper safeguard."""
    kind = "full"

    def coverage(self, y, mask=None):
        return 1.0

    def size(self, mask=None):
        return math.inf

    def bounds(self):
        return (-math.inf, math.inf)

    def __repr__(self):
        return "FullSpace"


EMPTY_SET = EmptySet()
FULL_SPACE = FullSpace()


class Interval(PredictionSet):
    """Closed real interval [lo, hi]; endpoints count as covered."""
    kind = "interval"

    def __init__(self, lo, hi):
        if lo > hi:
            raise ValueError(f"The interval lower end {lo} is above its upper end {hi}")
        self.lo = float(lo)
        self.hi = float(hi)

    def coverage(self, y, mask=None):
        return 1.0 if self.lo <= y <= self.hi else 0.0

    def size(self, mask=None):
        return self.hi - self.lo

    def bounds(self):
        return (self.lo, self.hi)

    def __eq__(self, other):
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


def make_interval(lo, hi):
    """Build [lo, hi], normalizing an inverted pair to the empty set."""
    if lo > hi:
        return EMPTY_SET
    return Interval(lo, hi)


class LabelSet(PredictionSet):
    """Finite set of class labels drawn from {1, ..., num_classes}."""
    kind = "labels"

    def __init__(self, members, num_classes):
        members = frozenset(int(member) for member in members)

        for member in members:
            if not 1 <= member <= num_classes:
                raise ValueError(f"Label [{member}] is not in 1..{num_classes}")

        self.members = members
        self.num_classes = num_classes

    def coverage(self, y, mask=None):
        return 1.0 if int(y) in self.members else 0.0

    def size(self, mask=None):
        return float(len(self.members))

    def __eq__(self, other):
        return isinstance(other, LabelSet) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"LabelSet({sorted(self.members)})"


class IntervalGrid(PredictionSet):
    """One closed interval per pixel. Inverted pixels (lower > upper) cover nothing."""
    kind = "grid"

    def __init__(self, lower, upper):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)

        if lower.shape != upper.shape:
            raise ValueError(f"Grid shapes differ: lower {lower.shape}, upper {upper.shape}")

        self.lower = lower
        self.upper = upper

    @property
    def shape(self):
        return self.lower.shape

    def covered_pixels(self, y):
        y = np.asarray(y, dtype=float)
        if y.shape != self.shape:
            raise ValueError(f"Label grid shape {y.shape} does not match the interval grid {self.shape}")
        return (self.lower <= y) & (y <= self.upper)

    def coverage(self, y, mask=None):
        covered = self.covered_pixels(y)
        if mask is None:
            return float(covered.mean())
        return float(covered[mask].mean())

    def size(self, mask=None):
        widths = np.maximum(self.upper - self.lower, 0.0)
        if mask is None:
            return float(widths.mean())
        return float(widths[mask].mean())

    def __repr__(self):
        return f"IntervalGrid(shape={self.shape})"
