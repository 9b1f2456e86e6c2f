import math
import unittest

import numpy as np
import pytest

from ..context import online_risk_control  # noqa: F401
from online_risk_control.algorithms import (RollingRiskController, build_stretch, check_risk_bound,
                                            check_theta_bounds, prefix_risk_bound, risk_bound, run_stream,
                                            safeguarded_construct, update_theta)
from online_risk_control.constructors import CQRConstructor, QuantileScaleConstructor
from online_risk_control.helpers import LossBoundError
from online_risk_control.losses import BinaryLoss, LossSpec, MiscoverageCounterLoss
from online_risk_control.models import ConstantModel, LinearPinballModel
from online_risk_control.streams import oracle_model
from online_risk_control.structures import EMPTY_SET, FULL_SPACE, Interval, RiskSpec


def constant_model(lo=2.0, hi=5.0):
    return ConstantModel({0.05: lo, 0.95: hi})


def gaussian_stream(length, seed=0):
    rng = np.random.default_rng(seed)
    for _ in range(length):
        yield np.zeros(1), float(rng.normal())


class UpdateThetaTests(unittest.TestCase):

    def setUp(self):
        self.spec = RiskSpec(r=0.1, gamma=0.05, m=-1, M=1)

    def test_loss_at_target_leaves_theta_fixed(self):
        state = update_theta(self.spec.initial_state(), 0.1, self.spec)

        self.assertEqual(state.theta, 0.0)
        self.assertEqual(state.t, 1)

    def test_direct_evaluation(self):
        state = self.spec.initial_state()._replace(theta=0.5)

        self.assertAlmostEqual(update_theta(state, 1.0, self.spec).theta, 0.545)

    def test_loss_sum_accumulates(self):
        state = self.spec.initial_state()
        for loss in (1.0, 0.0, 1.0):
            state = update_theta(state, loss, self.spec)

        self.assertEqual(state.loss_sum, 2.0)
        self.assertEqual(state.t, 3)

    def test_loss_outside_bound_is_rejected(self):
        with self.assertRaisesRegex(LossBoundError, "outside"):
            update_theta(self.spec.initial_state(), 1.5, self.spec)

    def test_non_finite_loss_is_rejected(self):
        with self.assertRaises(LossBoundError):
            update_theta(self.spec.initial_state(), math.nan, self.spec)

    def test_update_is_affine_in_the_loss(self):
        state = self.spec.initial_state()._replace(theta=0.3)
        a, l1, l2 = 0.25, 0.0, 1.0

        mixed = update_theta(state, a * l1 + (1 - a) * l2, self.spec).theta
        combined = a * update_theta(state, l1, self.spec).theta + (1 - a) * update_theta(state, l2, self.spec).theta
        self.assertAlmostEqual(mixed, combined, places=12)


class SafeguardedConstructTests(unittest.TestCase):

    def setUp(self):
        self.spec = RiskSpec(r=0.1, gamma=0.05, m=-1, M=1)
        self.constructor = CQRConstructor(alpha=0.1)

    def construct(self, theta):
        state = self.spec.initial_state()._replace(theta=theta)
        return safeguarded_construct(np.zeros(1), state, constant_model(), self.constructor, self.spec)

    def test_above_upper_safeguard_gives_full_space(self):
        self.assertIs(self.construct(self.spec.M + 1), FULL_SPACE)

    def test_below_lower_safeguard_gives_empty_set(self):
        self.assertIs(self.construct(self.spec.m - 1), EMPTY_SET)

    def test_zero_adjustment_returns_model_quantiles(self):
        self.assertEqual(self.construct(0.0), Interval(2, 5))

    def test_safeguards_are_strict(self):
        self.assertEqual(self.construct(self.spec.M), Interval(1, 6))


class RiskBoundTests(unittest.TestCase):

    def test_direct_evaluation(self):
        spec = RiskSpec(r=0.1, gamma=0.05, m=-1, M=1, B=1)

        self.assertAlmostEqual(risk_bound(spec, 1000), 0.044)

    def test_doubling_horizon_halves_the_bound(self):
        spec = RiskSpec(r=0.1, gamma=0.05, m=-1, M=1, B=1)

        self.assertAlmostEqual(risk_bound(spec, 2000), risk_bound(spec, 1000) / 2)

    def test_wide_safeguards_make_the_bound_vacuous(self):
        spec = RiskSpec(r=0.1, gamma=0.05, m=-9999, M=9999, B=1)

        self.assertAlmostEqual(risk_bound(spec, 12000), 33.33, places=2)

    def test_horizon_should_be_positive(self):
        spec = RiskSpec(r=0.1, gamma=0.05, m=-1, M=1)

        with self.assertRaisesRegex(ValueError, "horizon T should be at least 1"):
            risk_bound(spec, 0)

    def test_prefix_bound_from_the_middle_is_tighter(self):
        spec = RiskSpec(r=0.1, gamma=0.05, m=-1, M=1)

        self.assertLess(prefix_risk_bound(spec, 0.0, 100), risk_bound(spec, 100))


class RollingRiskControllerTests(unittest.TestCase):

    def setUp(self):
        self.spec = RiskSpec(r=0.1, gamma=0.05, m=-1, M=1)

    def test_empty_stream_gives_empty_trace(self):
        controller = RollingRiskController(constant_model(), CQRConstructor(), BinaryLoss(LossSpec("binary")),
                                           self.spec)
        trace = run_stream(iter(()), constant_model(), CQRConstructor(), BinaryLoss(LossSpec("binary")), self.spec)

        self.assertEqual(len(trace), 0)
        self.assertEqual(controller.state.loss_sum, 0.0)

    def test_construct_twice_is_rejected(self):
        controller = RollingRiskController(constant_model(), CQRConstructor(), BinaryLoss(LossSpec("binary")),
                                           self.spec)
        controller.construct(np.zeros(1))

        with self.assertRaisesRegex(RuntimeError, "construct called twice"):
            controller.construct(np.zeros(1))

    def test_observe_needs_a_pending_set(self):
        controller = RollingRiskController(constant_model(), CQRConstructor(), BinaryLoss(LossSpec("binary")),
                                           self.spec)

        with self.assertRaisesRegex(RuntimeError, "observe called before construct"):
            controller.observe(1.0)

    def test_adaptive_stretch_needs_a_score(self):
        with self.assertRaisesRegex(ValueError, "needs a constructor with a conformity score"):
            RollingRiskController(oracle_model(), QuantileScaleConstructor(), BinaryLoss(LossSpec("binary")),
                                  RiskSpec(r=0.1, gamma=0.05, m=-1, M=0),
                                  build_stretch("error_adaptive", 0.1, 0.1, -1, 1))

    def test_loss_reaching_above_b_is_rejected(self):
        loss = MiscoverageCounterLoss(LossSpec("mc", mc_cap=50))

        with self.assertRaisesRegex(ValueError, "can reach 50.0, above the declared bound"):
            RollingRiskController(constant_model(), CQRConstructor(), loss, self.spec)

    def test_broken_loss_contract_is_logged(self):
        spec = RiskSpec(r=0.0, gamma=0.05, m=-1, M=1)

        with self.assertLogs("online_risk_control.algorithms.rolling_risk_control", level="WARNING") as logs:
            RollingRiskController(constant_model(), CQRConstructor(), BinaryLoss(LossSpec("binary")), spec)

        self.assertIn("not guaranteed", logs.output[0])

    def test_model_is_updated_after_the_set_is_scored(self):
        model = LinearPinballModel(taus=(0.05, 0.95), learning_rate=0.5)
        controller = RollingRiskController(model, CQRConstructor(), BinaryLoss(LossSpec("binary")), self.spec)

        prediction_set = controller.construct(np.ones(1))
        self.assertEqual(prediction_set, Interval(0, 0))

        loss = controller.observe(3.0)
        self.assertEqual(loss, 1.0)
        self.assertGreater(model.predict(np.ones(1), 0.95), 0.0)

    def test_unstretched_run_matches_no_stretch_layer(self):
        loss = BinaryLoss(LossSpec("binary"))
        plain = run_stream(gaussian_stream(300), constant_model(-1, 1), CQRConstructor(), loss, self.spec)
        stretched = run_stream(gaussian_stream(300), constant_model(-1, 1), CQRConstructor(), loss, self.spec,
                               build_stretch("none"))

        self.assertEqual(plain.theta_post, stretched.theta_post)
        self.assertEqual(plain.set_lo, stretched.set_lo)

    def test_set_at_step_t_does_not_depend_on_label_t(self):
        samples = list(gaussian_stream(200, seed=3))
        altered = list(samples)
        altered[99] = (altered[99][0], 100.0)

        def run(stream):
            return run_stream(iter(stream), LinearPinballModel(learning_rate=0.05), CQRConstructor(),
                              BinaryLoss(LossSpec("binary")), self.spec)

        original, changed = run(samples), run(altered)

        self.assertEqual(original.set_lo[:100], changed.set_lo[:100])
        self.assertEqual(original.set_hi[:100], changed.set_hi[:100])
        self.assertNotEqual(original.set_hi[100:], changed.set_hi[100:])

    def test_replaying_a_prefix_reproduces_the_sets(self):
        samples = list(gaussian_stream(150, seed=5))

        def run(stream):
            return run_stream(iter(stream), LinearPinballModel(learning_rate=0.05), CQRConstructor(),
                              BinaryLoss(LossSpec("binary")), self.spec)

        full, prefix = run(samples), run(samples[:80])
        self.assertEqual(full.set_lo[:80], prefix.set_lo)
        self.assertEqual(full.theta_pre[:80], prefix.theta_pre)

    def test_bernoulli_like_losses_stay_within_the_bound(self):
        spec = RiskSpec(r=0.1, gamma=0.05, m=-1, M=1)
        trace = run_stream(gaussian_stream(10000, seed=11), constant_model(-1.645, 1.645), CQRConstructor(),
                           BinaryLoss(LossSpec("binary")), spec)

        losses = trace.loss_matrix()[:, 0]
        self.assertLessEqual(abs(trace.theta_post[-1][0] - spec.theta_init), spec.M - spec.m + 4 * spec.gamma)
        self.assertLessEqual(abs(losses.mean() - spec.r), risk_bound(spec, len(losses)))


def adversarial_run(spec, length, seed):
    """Labels go just outside the announced interval whenever the set allows it."""
    rng = np.random.default_rng(seed)
    model = LinearPinballModel(learning_rate=0.02)
    controller = RollingRiskController(model, CQRConstructor(), BinaryLoss(LossSpec("binary")), spec)

    for _ in range(length):
        x = rng.uniform(size=2)
        prediction_set = controller.construct(x)
        if isinstance(prediction_set, Interval) and rng.uniform() < 0.7:
            y = prediction_set.hi + 1.0
        else:
            y = float(rng.normal())
        controller.observe(y)

    return controller.trace


def random_spec(rng):
    gamma = float(rng.uniform(0.01, 0.5))
    m = -float(rng.uniform(0.5, 5.0))
    M = float(rng.uniform(0.5, 5.0))
    return RiskSpec(r=float(rng.uniform(0.05, 0.3)), gamma=gamma, m=m, M=M, B=1.0,
                    theta_init=float(rng.uniform(m, M)))


class TestAdversarialBounds:
    @pytest.mark.parametrize("seed", range(10))
    def test_bounds_hold_against_an_adversary(self, seed):
        spec = random_spec(np.random.default_rng(seed))
        trace = adversarial_run(spec, 2000, seed)

        assert check_theta_bounds(trace, spec).passed
        assert check_risk_bound(trace, spec).passed

    @pytest.mark.slow
    def test_bounds_hold_on_many_random_configurations(self):
        rng = np.random.default_rng(2024)
        for index in range(200):
            spec = random_spec(rng)
            trace = adversarial_run(spec, 10000, index)

            assert check_theta_bounds(trace, spec).passed, spec
            assert check_risk_bound(trace, spec).passed, spec
