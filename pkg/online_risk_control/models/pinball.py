"""Pinball (quantile) loss."""


def _validate_tau(tau):
    if not 0 < tau < 1:
        raise ValueError(f"The quantile level tau should be in (0, 1), got {tau}")


def pinball_loss(y, yhat, tau):
    """tau * (y - yhat) when y is above the estimate, (1 - tau) * (yhat - y) otherwise."""
    _validate_tau(tau)

    if y > yhat:
        return tau * (y - yhat)
    return (1.0 - tau) * (yhat - y)


def pinball_gradient(y, yhat, tau):
    """Subgradient of the pinball loss with respect to yhat (0 at the kink)."""
    _validate_tau(tau)

    if y > yhat:
        return -tau
    if y < yhat:
        return 1.0 - tau
    return 0.0
