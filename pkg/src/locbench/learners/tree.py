"""Binary decision trees grown by exhaustive greedy splitting.

Regression splits minimize the summed squared deviation of each child
from its mean; classification splits minimize count-weighted Gini
impurity.  Candidate thresholds are the midpoints between consecutive
distinct sorted feature values.  Queries descend LEFT when the feature
value is strictly greater than the node threshold, right otherwise --
the same orientation as rule listings that print the ">" branch first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import ValidationError


@dataclass
class TreeNode:
    """Either an internal split or a leaf.

    Internal nodes carry (feature, threshold, left, right, gain); leaves
    carry a payload ``value`` (float mean for regression, integer class
    counts for classification) and the training sample ``count``.
    ``gain`` is the training impurity decrease achieved by the split,
    in summed-squared-error or count-weighted Gini units.
    """

    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    value: float | np.ndarray | None = None
    count: int = 0
    gain: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def eval_tree(root: TreeNode, features) -> float | np.ndarray:
    """Route one feature row to a leaf and return its payload."""
    x = np.asarray(features, dtype=float)
    node = root
    while not node.is_leaf:
        node = node.left if x[node.feature] > node.threshold else node.right
    return node.value


def tree_predict(root: TreeNode, X: np.ndarray) -> np.ndarray:
    """Regression predictions (leaf means) for every row of X."""
    X = np.asarray(X, dtype=float)
    return np.array([eval_tree(root, row) for row in X], dtype=float)


def tree_predict_class(root: TreeNode, X: np.ndarray) -> np.ndarray:
    """Majority-class index per row; count ties go to the lowest class index."""
    X = np.asarray(X, dtype=float)
    return np.array([int(np.argmax(eval_tree(root, row))) for row in X], dtype=int)


def tree_depth(root: TreeNode) -> int:
    if root.is_leaf:
        return 0
    return 1 + max(tree_depth(root.left), tree_depth(root.right))


def tree_gains(root: TreeNode, n_features: int) -> np.ndarray:
    """Per-feature total impurity decrease over all splits of one tree."""
    gains = np.zeros(n_features)
    stack = [root]
    while stack:
        node = stack.pop()
        if not node.is_leaf:
            gains[node.feature] += node.gain
            stack.append(node.left)
            stack.append(node.right)
    return gains


def _weighted_sse(y: np.ndarray) -> float:
    return float(np.sum(y * y) - (np.sum(y) ** 2) / len(y))


def _weighted_gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    return float(n - np.sum(counts.astype(float) ** 2) / n)


def _best_split_regression(X, y, features, min_leaf):
    """Best (gain, feature, threshold) over candidates, or None.

    Iterates features ascending and thresholds ascending with a strictly-
    greater update rule, so exact ties resolve to the lowest feature index
    and then the lowest threshold.
    """
    n = len(y)
    parent = _weighted_sse(y)
    best = None
    for f in features:
        x = X[:, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        if xs[0] == xs[-1]:
            continue
        ys = y[order]
        csum = np.cumsum(ys)
        csq = np.cumsum(ys * ys)
        # Split between sorted positions i and i+1: the first i+1 samples
        # (values <= threshold) form the RIGHT child, the rest the LEFT.
        i = np.arange(n - 1)
        n_right = i + 1.0
        n_left = n - n_right
        valid = (xs[:-1] < xs[1:]) & (n_right >= min_leaf) & (n_left >= min_leaf)
        if not valid.any():
            continue
        sse_right = csq[:-1] - csum[:-1] ** 2 / n_right
        sse_left = (csq[-1] - csq[:-1]) - (csum[-1] - csum[:-1]) ** 2 / n_left
        gain = np.where(valid, parent - (sse_left + sse_right), -np.inf)
        pos = int(np.argmax(gain))
        if gain[pos] >= 0 and (best is None or gain[pos] > best[0]):
            threshold = (xs[pos] + xs[pos + 1]) / 2.0
            best = (float(gain[pos]), f, float(threshold))
    return best


def _best_split_gini(X, y, n_classes, features, min_leaf):
    """Classification counterpart of :func:`_best_split_regression`."""
    n = len(y)
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y] = 1.0
    total = onehot.sum(axis=0)
    parent = _weighted_gini(total)
    best = None
    for f in features:
        x = X[:, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        if xs[0] == xs[-1]:
            continue
        cum = np.cumsum(onehot[order], axis=0)
        right_counts = cum[:-1]
        left_counts = total - right_counts
        n_right = right_counts.sum(axis=1)
        n_left = n - n_right
        valid = (xs[:-1] < xs[1:]) & (n_right >= min_leaf) & (n_left >= min_leaf)
        if not valid.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            gini_right = n_right - np.sum(right_counts**2, axis=1) / n_right
            gini_left = n_left - np.sum(left_counts**2, axis=1) / n_left
        gain = np.where(valid, parent - (gini_left + gini_right), -np.inf)
        pos = int(np.argmax(gain))
        if gain[pos] >= 0 and (best is None or gain[pos] > best[0]):
            threshold = (xs[pos] + xs[pos + 1]) / 2.0
            best = (float(gain[pos]), f, float(threshold))
    return best


def fit_tree(
    X,
    y,
    *,
    task: str = "regression",
    max_depth: int | None = None,
    min_leaf: int = 1,
    n_classes: int | None = None,
    mtry: int | None = None,
    rng: np.random.Generator | None = None,
) -> TreeNode:
    """Grow a tree on (X, y).

    For classification, ``y`` holds integer class indices and
    ``n_classes`` must be given; leaves then store class-count tables.
    ``mtry`` enables per-split feature subsampling from ``rng`` (used by
    forests); if the sampled subset admits no valid split the search
    falls back to all features before giving up.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or len(X) != len(y):
        raise ValidationError(f"X and y disagree: {X.shape} vs {y.shape}")
    if len(y) == 0:
        raise ValidationError("cannot fit a tree on an empty training set")
    if len(y) < min_leaf:
        raise ValidationError(f"need at least min_leaf={min_leaf} samples, got {len(y)}")
    if task == "classification":
        if n_classes is None:
            raise ValidationError("classification requires n_classes")
        y = y.astype(int)
    elif task == "regression":
        y = y.astype(float)
    else:
        raise ValidationError(f"unknown task {task!r}")
    if mtry is not None and rng is None:
        raise ValidationError("feature subsampling requires an rng")

    p = X.shape[1]
    all_features = np.arange(p)

    def make_leaf(idx: np.ndarray) -> TreeNode:
        if task == "regression":
            payload: float | np.ndarray = float(y[idx].mean())
        else:
            payload = np.bincount(y[idx], minlength=n_classes)
        return TreeNode(value=payload, count=len(idx))

    def impure(idx: np.ndarray) -> bool:
        if task == "regression":
            return bool(y[idx].min() < y[idx].max())
        return bool(y[idx].min() != y[idx].max())

    def grow(idx: np.ndarray, depth: int) -> TreeNode:
        n_here = len(idx)
        depth_left = max_depth is None or depth < max_depth
        if not depth_left or n_here < 2 * min_leaf or not impure(idx):
            return make_leaf(idx)

        if mtry is not None and mtry < p:
            features = np.sort(rng.choice(p, size=mtry, replace=False))
        else:
            features = all_features
        Xn, yn = X[idx], y[idx]
        if task == "regression":
            best = _best_split_regression(Xn, yn, features, min_leaf)
            if best is None and len(features) < p:
                best = _best_split_regression(Xn, yn, all_features, min_leaf)
        else:
            best = _best_split_gini(Xn, yn, n_classes, features, min_leaf)
            if best is None and len(features) < p:
                best = _best_split_gini(Xn, yn, n_classes, all_features, min_leaf)
        if best is None:
            return make_leaf(idx)

        gain, feature, threshold = best
        goes_left = X[idx, feature] > threshold
        node = TreeNode(
            feature=int(feature),
            threshold=threshold,
            left=grow(idx[goes_left], depth + 1),
            right=grow(idx[~goes_left], depth + 1),
            count=n_here,
            gain=gain,
        )
        return node

    return grow(np.arange(len(y)), 0)
