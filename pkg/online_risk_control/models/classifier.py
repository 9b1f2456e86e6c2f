import numpy as np
from sklearn.linear_model import SGDClassifier

from .base import ModelHandle


class OnlineSoftmaxClassifier(ModelHandle):
    """Incrementally fitted logistic classifier over labels 1..num_classes.

    Before the first update every class gets probability 1 / num_classes.
    """

    output_kind = "probabilities"

    def __init__(self, num_classes, learning_rate=0.05, seed=0):
        if num_classes < 2:
            raise ValueError(f"A classifier needs at least two classes, got {num_classes}")

        self.num_classes = num_classes
        self.classes = np.arange(1, num_classes + 1)
        self.estimator = SGDClassifier(loss="log_loss", learning_rate="constant", eta0=learning_rate,
                                       random_state=seed)
        self.fitted = False

    def predict(self, x, tau):
        raise ValueError("A classifier answers class probabilities, not quantile queries")

    def predict_proba(self, x):
        if not self.fitted:
            return np.full(self.num_classes, 1.0 / self.num_classes)

        probs = self.estimator.predict_proba(np.atleast_2d(np.asarray(x, dtype=float)))[0]
        return probs / probs.sum()

    def update(self, x, y):
        self.estimator.partial_fit(np.atleast_2d(np.asarray(x, dtype=float)), [int(y)], classes=self.classes)
        self.fitted = True
        return self
