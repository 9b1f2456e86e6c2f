import math
import unittest

import numpy as np

from ..context import online_risk_control  # noqa: F401
from online_risk_control.structures import (EMPTY_SET, FULL_SPACE, Interval, IntervalGrid, LabelSet,
                                            make_interval)


class IntervalTests(unittest.TestCase):

    def test_endpoints_are_covered(self):
        interval = Interval(2, 4)

        self.assertEqual(interval.coverage(2), 1.0)
        self.assertEqual(interval.coverage(4), 1.0)
        self.assertEqual(interval.coverage(4.0001), 0.0)

    def test_inverted_interval_is_rejected(self):
        with self.assertRaisesRegex(ValueError, "lower end 5 is above its upper end 2"):
            Interval(5, 2)

    def test_make_interval_normalizes_inverted_pair_to_empty_set(self):
        self.assertIs(make_interval(5, 2), EMPTY_SET)
        self.assertEqual(make_interval(2, 5), Interval(2, 5))

    def test_size_and_bounds(self):
        interval = Interval(0.5, 6.5)

        self.assertEqual(interval.size(), 6.0)
        self.assertEqual(interval.bounds(), (0.5, 6.5))


class ExtremeSetTests(unittest.TestCase):

    def test_full_space_covers_everything(self):
        self.assertEqual(FULL_SPACE.coverage(1e12), 1.0)
        self.assertEqual(FULL_SPACE.size(), math.inf)
        self.assertEqual(FULL_SPACE.bounds(), (-math.inf, math.inf))

    def test_empty_set_covers_nothing(self):
        self.assertEqual(EMPTY_SET.coverage(0.0), 0.0)
        self.assertEqual(EMPTY_SET.size(), 0.0)
        self.assertTrue(all(math.isnan(bound) for bound in EMPTY_SET.bounds()))


class LabelSetTests(unittest.TestCase):

    def test_members_should_be_valid_labels(self):
        with self.assertRaisesRegex(ValueError, r"Label \[4\] is not in 1..3"):
            LabelSet([1, 4], 3)

    def test_coverage_and_size(self):
        labels = LabelSet([1, 2], 3)

        self.assertEqual(labels.coverage(2), 1.0)
        self.assertEqual(labels.coverage(3), 0.0)
        self.assertEqual(labels.size(), 2.0)


class IntervalGridTests(unittest.TestCase):

    def test_coverage_is_ratio_of_covered_pixels(self):
        grid = IntervalGrid(np.zeros((2, 2)), np.ones((2, 2)))
        y = np.array([[0.5, 0.5], [0.5, 2.0]])

        self.assertEqual(grid.coverage(y), 0.75)

    def test_coverage_restricted_to_mask(self):
        grid = IntervalGrid(np.zeros((2, 2)), np.ones((2, 2)))
        y = np.array([[0.5, 0.5], [0.5, 2.0]])
        mask = np.array([[True, False], [False, True]])

        self.assertEqual(grid.coverage(y, mask), 0.5)

    def test_inverted_pixels_have_zero_width(self):
        grid = IntervalGrid(np.array([[0.0, 1.0]]), np.array([[2.0, 0.0]]))

        self.assertEqual(grid.size(), 1.0)

    def test_shape_mismatch_is_rejected(self):
        grid = IntervalGrid(np.zeros((2, 2)), np.ones((2, 2)))

        with self.assertRaisesRegex(ValueError, "does not match the interval grid"):
            grid.coverage(np.zeros((3, 3)))
