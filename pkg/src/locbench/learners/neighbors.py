"""k-nearest-neighbor prediction under the Euclidean metric.

Distance ties at the k-th neighbor resolve to the lowest training row
index (stable sort order).  Standardize features upstream; raw distances
are otherwise dominated by large-scale columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import ValidationError


@dataclass(frozen=True)
class KnnModel:
    X: np.ndarray
    y: np.ndarray
    k: int
    task: str
    n_classes: int | None = None

    def predict(self, X: np.ndarray) -> np.ndarray:
        return predict_knn(self, X)

    def predict_confidence(self, X: np.ndarray) -> np.ndarray:
        if self.task != "classification":
            raise ValidationError("confidence output requires a classification model")
        return predict_knn(self, X)


def fit_knn(X, y, *, k: int = 5, task: str = "regression", n_classes: int | None = None) -> KnnModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if task not in ("regression", "classification"):
        raise ValidationError(f"unknown task {task!r}")
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if k > len(X):
        raise ValidationError(f"k={k} exceeds the {len(X)} training rows")
    if task == "classification":
        if n_classes is None:
            raise ValidationError("classification requires n_classes")
        y = y.astype(int)
    else:
        y = y.astype(float)
    return KnnModel(X=X, y=y, k=k, task=task, n_classes=n_classes)


def _neighbor_indices(model: KnnModel, queries: np.ndarray) -> np.ndarray:
    diff = queries[:, None, :] - model.X[None, :, :]
    d2 = np.einsum("qnp,qnp->qn", diff, diff)
    # Stable sort keeps equal distances in training-row order.
    return np.argsort(d2, axis=1, kind="stable")[:, : model.k]


def predict_knn(model: KnnModel, X) -> np.ndarray:
    """Mean neighbor target (regression) or vote fractions (classification)."""
    queries = np.atleast_2d(np.asarray(X, dtype=float))
    nearest = _neighbor_indices(model, queries)
    if model.task == "regression":
        return model.y[nearest].mean(axis=1)
    conf = np.zeros((len(queries), model.n_classes))
    for row, idx in enumerate(nearest):
        conf[row] = np.bincount(model.y[idx], minlength=model.n_classes) / model.k
    return conf
