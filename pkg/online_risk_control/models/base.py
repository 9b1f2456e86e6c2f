class ModelHandle:
    """Interface the calibration loop expects from an online model.

    predict is deterministic given the internal state and x; update may only
    use the (x, y) pair it is given.
    """

    output_kind = "quantiles"

    def predict(self, x, tau):
        raise NotImplementedError

    def update(self, x, y):
        return self
