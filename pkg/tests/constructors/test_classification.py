import itertools
import unittest

import numpy as np
import pytest

from ..context import online_risk_control  # noqa: F401
from online_risk_control.constructors import (ClassCumulativeConstructor, ClassThresholdConstructor,
                                              class_cumulative_set, class_threshold_set, validate_probabilities)
from online_risk_control.structures import EMPTY_SET, FULL_SPACE, LabelSet

PROBS = (0.5, 0.3, 0.2)


class FixedProbabilities:
    output_kind = "probabilities"

    def __init__(self, probs):
        self.probs = np.asarray(probs)

    def predict_proba(self, x):
        return self.probs


class ClassThresholdSetTests(unittest.TestCase):

    def test_threshold(self):
        self.assertEqual(class_threshold_set(PROBS, 0.25), LabelSet([1, 2], 3))

    def test_threshold_is_inclusive(self):
        self.assertEqual(class_threshold_set(PROBS, 0.3), LabelSet([1, 2], 3))

    def test_extremes(self):
        self.assertIs(class_threshold_set(PROBS, 0.0), FULL_SPACE)
        self.assertIs(class_threshold_set(PROBS, 1.2), EMPTY_SET)
        self.assertIs(class_threshold_set(PROBS, 0.6), EMPTY_SET)

    def test_lower_threshold_gives_larger_sets(self):
        sizes = [class_threshold_set(PROBS, thr).size() for thr in (0.6, 0.45, 0.25, 0.1)]

        self.assertEqual(sizes, [0.0, 1.0, 2.0, 3.0])


class ClassCumulativeSetTests(unittest.TestCase):

    def test_level(self):
        self.assertEqual(class_cumulative_set(PROBS, 0.7), LabelSet([1, 2], 3))

    def test_level_just_above_a_prefix_mass(self):
        self.assertEqual(class_cumulative_set(PROBS, 0.81), LabelSet([1, 2, 3], 3))

    def test_extremes(self):
        self.assertIs(class_cumulative_set(PROBS, 0.0), EMPTY_SET)
        self.assertIs(class_cumulative_set(PROBS, 1.1), FULL_SPACE)
        self.assertEqual(class_cumulative_set(PROBS, 1.0), LabelSet([1, 2, 3], 3))

    def test_ties_go_to_the_smaller_label(self):
        self.assertEqual(class_cumulative_set((0.25, 0.25, 0.5), 0.6), LabelSet([3, 1], 3))

    def test_unordered_probabilities(self):
        self.assertEqual(class_cumulative_set((0.1, 0.6, 0.3), 0.5), LabelSet([2], 3))


class TestCumulativeSetAgainstEnumeration:
    @pytest.mark.parametrize("seed", range(25))
    def test_prefix_is_the_smallest_set_reaching_the_level(self, seed):
        rng = np.random.default_rng(seed)
        probs = rng.dirichlet(np.ones(6))
        level = float(rng.uniform(0.05, 0.95))

        prediction_set = class_cumulative_set(probs, level)
        smallest = min(size for size in range(1, 7) for subset in itertools.combinations(range(6), size)
                       if probs[list(subset)].sum() >= level)
        assert len(prediction_set.members) == smallest

        members = sorted(prediction_set.members)
        mass = probs[[label - 1 for label in members]].sum()
        weakest = min(members, key=lambda label: probs[label - 1])
        assert mass >= level
        assert mass - probs[weakest - 1] < level


class ValidateProbabilitiesTests(unittest.TestCase):

    def test_should_sum_to_one(self):
        with self.assertRaisesRegex(ValueError, "should sum to 1"):
            validate_probabilities([0.5, 0.4])

    def test_should_be_nonnegative(self):
        with self.assertRaisesRegex(ValueError, "finite and nonnegative"):
            validate_probabilities([1.2, -0.2])

    def test_should_be_a_vector(self):
        with self.assertRaisesRegex(ValueError, "non-empty probability vector"):
            validate_probabilities([])


class ClassConstructorTests(unittest.TestCase):

    def setUp(self):
        self.model = FixedProbabilities(PROBS)

    def test_threshold_constructor_negates_the_adjustment(self):
        self.assertEqual(ClassThresholdConstructor().construct(self.model, None, -0.25), LabelSet([1, 2], 3))

    def test_cumulative_constructor_shifts_the_level(self):
        self.assertEqual(ClassCumulativeConstructor().construct(self.model, None, -0.3), LabelSet([1, 2], 3))

    def test_safeguard_directions(self):
        # theta above M = 0 is the full space, below m = -1 the empty set
        self.assertIs(ClassThresholdConstructor().construct(self.model, None, 0.0), FULL_SPACE)
        self.assertIs(ClassCumulativeConstructor().construct(self.model, None, -1.0), EMPTY_SET)
