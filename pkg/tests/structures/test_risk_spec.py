import unittest

import numpy as np

from ..context import online_risk_control  # noqa: F401
from online_risk_control.structures import MultiRiskSpec, RiskSpec


class RiskSpecTests(unittest.TestCase):

    def test_gamma_should_be_positive(self):
        with self.assertRaisesRegex(ValueError, "step size gamma should be positive"):
            RiskSpec(r=0.1, gamma=0, m=-1, M=1)

    def test_safeguards_should_be_ordered(self):
        with self.assertRaisesRegex(ValueError, "lower safeguard m"):
            RiskSpec(r=0.1, gamma=0.05, m=1, M=1)

    def test_target_should_be_within_loss_bound(self):
        with self.assertRaisesRegex(ValueError, r"should be in \[-B, B\]"):
            RiskSpec(r=1.5, gamma=0.05, m=-1, M=1, B=1)

    def test_initial_state(self):
        state = RiskSpec(r=0.1, gamma=0.05, m=-1, M=1, theta_init=0.3).initial_state()

        self.assertEqual(state.theta, 0.3)
        self.assertEqual(state.t, 0)
        self.assertEqual(state.loss_sum, 0.0)

    def test_theta_range_widens_safeguards_by_two_gamma_b(self):
        spec = RiskSpec(r=0.1, gamma=0.05, m=-1, M=1, B=2)

        lower, upper = spec.theta_range()
        self.assertAlmostEqual(lower, -1.2)
        self.assertAlmostEqual(upper, 1.2)


class MultiRiskSpecTests(unittest.TestCase):

    def test_scalars_are_broadcast(self):
        spec = MultiRiskSpec(r=[0.2, 0.1], gamma=0.05, m=-5, M=5)

        self.assertEqual(spec.k, 2)
        np.testing.assert_array_equal(spec.gamma, [0.05, 0.05])
        np.testing.assert_array_equal(spec.M, [5.0, 5.0])

    def test_vector_length_should_match(self):
        with self.assertRaisesRegex(ValueError, "should have 2 entries"):
            MultiRiskSpec(r=[0.2, 0.1], gamma=[0.05, 0.05, 0.05], m=-5, M=5)

    def test_unknown_aggregation_is_rejected(self):
        with self.assertRaisesRegex(ValueError, r"Unknown aggregation \[median\]"):
            MultiRiskSpec(r=[0.2], gamma=0.05, m=-5, M=5, aggregation="median")

    def test_single_risk_view(self):
        spec = MultiRiskSpec(r=[0.2, 0.1], gamma=[0.05, 0.1], m=-5, M=5)

        risk = spec.risk(1)
        self.assertEqual(risk.r, 0.1)
        self.assertEqual(risk.gamma, 0.1)
