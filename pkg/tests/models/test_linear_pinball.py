import unittest

import numpy as np
import pytest

from ..context import online_risk_control  # noqa: F401
from online_risk_control.models import LinearPinballModel


class LinearPinballModelTests(unittest.TestCase):

    def test_starts_at_zero(self):
        model = LinearPinballModel(taus=(0.9,))

        self.assertEqual(model.predict([1.0, 2.0], 0.9), 0.0)

    def test_one_step_moves_towards_the_label(self):
        model = LinearPinballModel(taus=(0.9,), learning_rate=0.1, fit_intercept=False)
        model.update([1.0], 5.0)

        np.testing.assert_allclose(model.weights[0.9], [0.09])

    def test_step_down_when_above_the_label(self):
        model = LinearPinballModel(taus=(0.9,), learning_rate=0.1, fit_intercept=False)
        model.update([1.0], -5.0)

        np.testing.assert_allclose(model.weights[0.9], [-0.01])

    def test_intercept_is_a_constant_feature(self):
        model = LinearPinballModel(taus=(0.5,), learning_rate=1.0)
        model.update([0.0], 3.0)

        self.assertAlmostEqual(model.predict([0.0], 0.5), 0.5)

    def test_several_steps_per_update(self):
        single = LinearPinballModel(taus=(0.5,), learning_rate=0.1, fit_intercept=False)
        repeated = LinearPinballModel(taus=(0.5,), learning_rate=0.1, steps_per_update=3, fit_intercept=False)
        single.update([1.0], 5.0)
        repeated.update([1.0], 5.0)

        self.assertAlmostEqual(repeated.predict([1.0], 0.5), 3 * single.predict([1.0], 0.5))

    def test_zero_learning_rate_freezes_the_model(self):
        model = LinearPinballModel(learning_rate=0.0)
        for y in (1.0, -3.0, 10.0):
            model.update([0.3, 0.4], y)

        self.assertEqual(model.predict([0.3, 0.4], 0.05), 0.0)
        self.assertEqual(model.predict([0.3, 0.4], 0.95), 0.0)

    def test_untracked_level(self):
        with self.assertRaisesRegex(ValueError, "not tracked"):
            LinearPinballModel(taus=(0.05, 0.95)).predict([0.0], 0.5)

    def test_invalid_parameters(self):
        with self.assertRaisesRegex(ValueError, "learning rate should be nonnegative"):
            LinearPinballModel(learning_rate=-1.0)
        with self.assertRaisesRegex(ValueError, "At least one step"):
            LinearPinballModel(steps_per_update=0)
        with self.assertRaisesRegex(ValueError, "should be in"):
            LinearPinballModel(taus=(0.5, 1.0))

    def test_non_finite_data(self):
        model = LinearPinballModel()

        with self.assertRaisesRegex(ValueError, "should be finite"):
            model.predict([np.nan], 0.05)
        with self.assertRaisesRegex(ValueError, "should be finite"):
            model.update([0.0], np.inf)


@pytest.mark.slow
def test_learns_a_conditional_quantile():
    rng = np.random.default_rng(0)
    model = LinearPinballModel(taus=(0.95,), learning_rate=0.01)

    for _ in range(50_000):
        x = rng.uniform()
        model.update([x], 2 * x + 1 + rng.normal())

    assert abs(model.predict([0.5], 0.95) - (2 * 0.5 + 1.645)) < 0.15
