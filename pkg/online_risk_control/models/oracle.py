from scipy.stats import norm

from .base import ModelHandle


class GaussianOracleModel(ModelHandle):
    """Answers any quantile query exactly for y | x ~ N(mean(x), std(x)^2); never learns."""

    def __init__(self, mean_function, std_function):
        self.mean_function = mean_function
        self.std_function = std_function

    def predict(self, x, tau):
        if not 0 <= tau <= 1:
            raise ValueError(f"The quantile level tau should be in [0, 1], got {tau}")
        return float(self.mean_function(x) + norm.ppf(tau) * self.std_function(x))


class ConstantModel(ModelHandle):
    """Fixed quantile estimates, whatever the input."""

    def __init__(self, quantiles):
        self.quantiles = {float(tau): float(value) for tau, value in dict(quantiles).items()}

    def predict(self, x, tau):
        for tracked, value in self.quantiles.items():
            if abs(tracked - tau) < 1e-12:
                return value
        raise ValueError(f"Quantile level {tau} is not tracked (tracked: {tuple(self.quantiles)})")
