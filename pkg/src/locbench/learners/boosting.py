"""Gradient boosted regression trees (stagewise least squares).

The model starts from the target mean; each stage fits a depth-limited
tree to the current residuals and adds ``rate`` times its output.  With
least-squares leaves and a rate in (0, 1] every stage can only lower the
training loss, so the recorded per-stage losses are non-increasing.
Training is deterministic (no row subsampling); the seed is accepted for
interface parity with the other ensemble learners.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import ValidationError
from .tree import TreeNode, fit_tree, tree_predict


@dataclass(frozen=True)
class GbtModel:
    baseline: float
    trees: tuple[TreeNode, ...]
    rate: float
    train_losses: tuple[float, ...]  # training MSE after 0, 1, ..., n stages

    def predict(self, X: np.ndarray) -> np.ndarray:
        return predict_gbt(self, X)


def fit_gbt(
    X,
    y,
    *,
    n_trees: int = 100,
    max_depth: int = 5,
    rate: float = 0.1,
    min_leaf: int = 1,
    seed: int = 42,
) -> GbtModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(y) == 0:
        raise ValidationError("cannot boost on an empty training set")
    if not (0.0 < rate <= 1.0):
        raise ValidationError(f"rate must be in (0, 1], got {rate}")

    baseline = float(y.mean())
    current = np.full(len(y), baseline)
    losses = [float(np.mean((y - current) ** 2))]
    trees = []
    for _ in range(n_trees):
        residual = y - current
        tree = fit_tree(X, residual, task="regression", max_depth=max_depth, min_leaf=min_leaf)
        current = current + rate * tree_predict(tree, X)
        trees.append(tree)
        losses.append(float(np.mean((y - current) ** 2)))
    return GbtModel(
        baseline=baseline, trees=tuple(trees), rate=rate, train_losses=tuple(losses)
    )


def predict_gbt(model: GbtModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    out = np.full(len(X), model.baseline)
    for tree in model.trees:
        out += model.rate * tree_predict(tree, X)
    return out
