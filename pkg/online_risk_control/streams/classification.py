"""Gaussian class-conditional stream with abrupt shifts of the class centers."""
from collections import namedtuple

import numpy as np

ClassificationConfig = namedtuple("ClassificationConfig", [
    "seed", "num_classes", "dimension", "separation", "noise_std", "shift_every", "length",
])
ClassificationConfig.__new__.__defaults__ = (0, 5, 4, 2.0, 1.0, 2000, None)


def classification_stream(config):
    """Iterate (x, label, segment) with labels in 1..num_classes.

    Every shift_every steps the class centers are redrawn.
    """
    if config.num_classes < 2:
        raise ValueError(f"A classification stream needs at least two classes, got {config.num_classes}")

    rng = np.random.default_rng(config.seed)
    t = 0
    centers = None

    while config.length is None or t < config.length:
        segment = t // config.shift_every
        if t % config.shift_every == 0:
            centers = rng.normal(0.0, config.separation, size=(config.num_classes, config.dimension))

        label = int(rng.integers(1, config.num_classes + 1))
        x = centers[label - 1] + rng.normal(0.0, config.noise_std, size=config.dimension)

        yield x, label, segment
        t += 1
