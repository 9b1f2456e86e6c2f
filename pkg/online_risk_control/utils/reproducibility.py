"""Ensure reproducibility."""
import random

import numpy as np


def make_reproducible(seed, use_numpy=True):
    """Set global random seeds to ensure reproducibility."""
    random.seed(seed)

    if use_numpy:
        np.random.seed(seed)


def trial_generator(seed, *stream_keys):
    """Independent numpy generator for one (seed, component) pair.

    Components of a trial (stream, model, ...) draw from distinct child
    sequences so adding randomness to one never shifts another.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *[int(key) for key in stream_keys]]))
