from ..algorithms.stretching import apply as apply_stretch


class SetConstructor:
    """Common interface of the set constructing functions.

    Attributes:
        output_kind (str): what the model must produce ("quantiles", "probabilities" or "image")
        supports_score (bool): whether a conformity score exists for the adaptive stretching kinds
    """

    output_kind = "quantiles"
    supports_score = False

    def adjustment(self, theta, stretch):
        """Effective calibration adjustment fed to construct, phi(theta) by default."""
        return apply_stretch(stretch, theta)

    def construct(self, model, x, adjustment):
        raise NotImplementedError

    def score(self, model, x, y):
        raise ValueError(f"{type(self).__name__} has no conformity score")

    def update(self, x, y):
        """Advance constructor-owned state (uncertainty heuristics) after y is revealed."""

    def check_model(self, model):
        model_kind = getattr(model, "output_kind", "image" if model is None else None)
        if model_kind != self.output_kind:
            raise ValueError(
                f"{type(self).__name__} needs a model producing {self.output_kind}, got {model_kind}"
            )
