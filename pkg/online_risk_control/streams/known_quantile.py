"""Stream whose conditional distribution is known exactly: y | x ~ N(mean(x), std(x)^2)."""
import math
from collections import namedtuple

import numpy as np

from ..models import GaussianOracleModel

KnownQuantileConfig = namedtuple("KnownQuantileConfig", ["seed", "dimension", "group_length", "length"])
KnownQuantileConfig.__new__.__defaults__ = (0, 3, 500, None)


def conditional_mean(x):
    return 2.0 * x[0] + math.sin(2.0 * math.pi * x[1 % len(x)])


def conditional_std(x):
    return 0.5 + x[-1]


def known_quantile_stream(config):
    """Iterate (x, y, group) with x ~ Uniform(0, 1)^dimension."""
    rng = np.random.default_rng(config.seed)
    t = 0

    while config.length is None or t < config.length:
        x = rng.uniform(0.0, 1.0, size=config.dimension)
        y = conditional_mean(x) + conditional_std(x) * rng.normal()
        yield x, float(y), t // config.group_length
        t += 1


def oracle_model():
    """Model answering the exact conditional quantiles of the known-quantile stream."""
    return GaussianOracleModel(conditional_mean, conditional_std)
