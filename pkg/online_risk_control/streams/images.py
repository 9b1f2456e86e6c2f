"""Desk-scale image stream: a slowly evolving scene observed through noise.

The prediction context is the latent scene S_t (an AR(1) of smooth random
fields); the label adds spatially correlated noise whose variance is
multiplied by (1 + shift_amplitude) on every other segment of shift_every
frames. A fixed valid-pixel mask marks pixels excluded from the losses.
"""
import math
from collections import namedtuple

import numpy as np
from scipy.ndimage import gaussian_filter

ImageStreamConfig = namedtuple("ImageStreamConfig", [
    "seed", "height", "width", "smoothness", "noise_scale", "scene_persistence", "shift_every",
    "shift_amplitude", "invalid_fraction", "length",
])
ImageStreamConfig.__new__.__defaults__ = (0, 16, 16, 2.0, 1.0, 0.9, 500, 1.0, 0.0, None)


class ImageStreamState:
    def __init__(self, config):
        if config.height < 1 or config.width < 1:
            raise ValueError(f"Image grid should be at least 1x1, got {config.height}x{config.width}")
        if not 0 <= config.scene_persistence < 1:
            raise ValueError(f"Scene persistence should be in [0, 1), got {config.scene_persistence}")
        if config.shift_amplitude < -1 + 1e-12:
            raise ValueError(f"Shift amplitude should be above -1, got {config.shift_amplitude}")

        self.rng = np.random.default_rng(config.seed)
        self.t = 0

        self.valid_mask = self.rng.uniform(size=(config.height, config.width)) >= config.invalid_fraction
        if not self.valid_mask.any():
            self.valid_mask[config.height // 2, config.width // 2] = True

        self.scene = _smooth_field(self.rng, config)


def _smooth_field(rng, config):
    """Spatially correlated field with unit standard deviation."""
    field = rng.normal(size=(config.height, config.width))
    if config.smoothness > 0 and field.size > 1:
        field = gaussian_filter(field, sigma=config.smoothness, mode="wrap")
    std = field.std()
    return field / std if std > 0 else field


def noise_scale_at(t, config):
    """Label noise standard deviation at frame t (0-based)."""
    shifted = (t // config.shift_every) % 2 == 1
    if shifted:
        return config.noise_scale * math.sqrt(1.0 + config.shift_amplitude)
    return config.noise_scale


def image_stream_next(state, config):
    """Advance one frame; returns (prediction grid, label grid)."""
    persistence = config.scene_persistence
    if state.t > 0:
        innovation = _smooth_field(state.rng, config)
        state.scene = persistence * state.scene + math.sqrt(1.0 - persistence ** 2) * innovation

    prediction = state.scene.copy()
    label = prediction + noise_scale_at(state.t, config) * _smooth_field(state.rng, config)

    state.t += 1
    return prediction, label


def image_stream(config, state=None):
    """Iterate (prediction, label, segment); pass a state to read its valid_mask."""
    state = state if state is not None else ImageStreamState(config)
    while config.length is None or state.t < config.length:
        segment = state.t // config.shift_every
        prediction, label = image_stream_next(state, config)
        yield prediction, label, segment
