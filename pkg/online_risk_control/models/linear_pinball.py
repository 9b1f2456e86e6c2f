"""Online linear quantile regression."""
import numpy as np

from .base import ModelHandle
from .pinball import pinball_gradient


class LinearPinballModel(ModelHandle):
    """One independent linear model per tracked quantile level.

    Parameters
    ----------
    taus : sequence of float
        Quantile levels to track, e.g. (0.05, 0.95).
    learning_rate : float
        Step size of the subgradient updates.
    steps_per_update : int
        Subgradient steps taken per arriving sample.
    fit_intercept : bool
        Append a constant feature.

    """

    def __init__(self, taus=(0.05, 0.95), learning_rate=0.01, steps_per_update=1, fit_intercept=True):
        if learning_rate < 0:
            raise ValueError(f"The learning rate should be nonnegative, got {learning_rate}")
        if steps_per_update < 1:
            raise ValueError(f"At least one step per update is needed, got {steps_per_update}")

        for tau in taus:
            if not 0 < tau < 1:
                raise ValueError(f"Tracked quantile levels should be in (0, 1), got {tau}")

        self.taus = tuple(float(tau) for tau in taus)
        self.learning_rate = learning_rate
        self.steps_per_update = steps_per_update
        self.fit_intercept = fit_intercept
        self.weights = None

    def _design(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if not np.all(np.isfinite(x)):
            raise ValueError("Model input features should be finite")
        if self.fit_intercept:
            x = np.append(x, 1.0)
        if self.weights is None:
            self.weights = {tau: np.zeros(x.size) for tau in self.taus}
        return x

    def _tracked(self, tau):
        for tracked in self.taus:
            if abs(tracked - tau) < 1e-12:
                return tracked
        raise ValueError(f"Quantile level {tau} is not tracked (tracked: {self.taus})")

    def predict(self, x, tau):
        tau = self._tracked(tau)
        design = self._design(x)
        return float(design @ self.weights[tau])

    def update(self, x, y):
        if not np.isfinite(y):
            raise ValueError(f"Model targets should be finite, got {y}")

        design = self._design(x)
        for tau in self.taus:
            weights = self.weights[tau]
            for _ in range(self.steps_per_update):
                gradient = pinball_gradient(y, float(design @ weights), tau)
                weights = weights - self.learning_rate * gradient * design
            self.weights[tau] = weights

        return self
