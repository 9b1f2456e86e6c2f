import unittest

import numpy as np
import pytest

from ..context import online_risk_control  # noqa: F401
from online_risk_control.streams import KnownQuantileConfig, known_quantile_stream, oracle_model


class KnownQuantileStreamTests(unittest.TestCase):

    def test_samples(self):
        samples = list(known_quantile_stream(KnownQuantileConfig(seed=0, length=1200, group_length=500)))

        self.assertEqual(len(samples), 1200)
        self.assertEqual([samples[index][2] for index in (0, 499, 500, 1199)], [0, 0, 1, 2])
        self.assertTrue(all(x.shape == (3,) and np.all((0 <= x) & (x < 1)) for x, _, _ in samples))

    def test_deterministic(self):
        first = [y for _, y, _ in known_quantile_stream(KnownQuantileConfig(seed=4, length=50))]
        second = [y for _, y, _ in known_quantile_stream(KnownQuantileConfig(seed=4, length=50))]

        self.assertEqual(first, second)

    def test_oracle_median_is_the_conditional_mean(self):
        x = np.array([0.25, 0.25, 0.5])

        self.assertAlmostEqual(oracle_model().predict(x, 0.5), 0.5 + 1.0)


@pytest.mark.slow
def test_oracle_quantiles_cover_at_their_level():
    oracle = oracle_model()
    samples = list(known_quantile_stream(KnownQuantileConfig(seed=0, length=100_000)))

    inside = [oracle.predict(x, 0.05) <= y <= oracle.predict(x, 0.95) for x, y, _ in samples]

    assert abs(np.mean(inside) - 0.9) < 0.005
