"""Fully-connected networks trained by seeded mini-batch gradient descent.

Two presets cover the benchmarked configurations: a single hidden layer
of 10 sigmoid units, and two hidden layers of 50 rectified-linear units.
Regression trains on squared loss with targets scaled into [0, 1]
internally (inverted at predict time); classification trains on softmax
cross-entropy.  Weights initialize uniformly in +/- 1/sqrt(fan_in),
biases at zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import ValidationError
from .base import TrainingDivergedError


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


class MlpNetwork:
    """The bare network: parameters, forward pass, loss, and gradients.

    Exposed separately from the fitted-model wrapper so the analytic
    gradients can be checked against finite differences directly.
    """

    def __init__(self, layer_sizes: tuple[int, ...], activation: str, task: str, seed: int = 42):
        if len(layer_sizes) < 2:
            raise ValidationError("need at least input and output layer sizes")
        if activation not in ("sigmoid", "relu"):
            raise ValidationError(f"unknown activation {activation!r}")
        if task not in ("regression", "classification"):
            raise ValidationError(f"unknown task {task!r}")
        self.layer_sizes = tuple(layer_sizes)
        self.activation = activation
        self.task = task
        rng = np.random.default_rng(seed)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            self.weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))

    def _act(self, z: np.ndarray) -> np.ndarray:
        return _sigmoid(z) if self.activation == "sigmoid" else np.maximum(z, 0.0)

    def _act_grad(self, z: np.ndarray, a: np.ndarray) -> np.ndarray:
        return a * (1.0 - a) if self.activation == "sigmoid" else (z > 0).astype(float)

    def forward(self, X: np.ndarray) -> np.ndarray:
        """Network output: raw values (regression) or class probabilities."""
        a = np.asarray(X, dtype=float)
        last = len(self.weights) - 1
        for l, (W, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ W + b
            a = z if l == last else self._act(z)
        return _softmax(a) if self.task == "classification" else a

    def loss(self, X: np.ndarray, y: np.ndarray) -> float:
        # Overflow here is the divergence signal, not an error: the caller
        # checks for a non-finite result.
        with np.errstate(over="ignore", invalid="ignore"):
            out = self.forward(X)
            if self.task == "regression":
                t = np.asarray(y, dtype=float).reshape(out.shape)
                return float(0.5 * np.mean(np.sum((out - t) ** 2, axis=1)))
            n = len(out)
            picked = out[np.arange(n), np.asarray(y, dtype=int)]
            return float(-np.mean(np.log(np.clip(picked, 1e-300, None))))

    def loss_and_grads(self, X: np.ndarray, y: np.ndarray):
        """Mean loss over the batch plus gradients for every parameter."""
        X = np.asarray(X, dtype=float)
        n = len(X)
        zs: list[np.ndarray] = []
        activations = [X]
        a = X
        last = len(self.weights) - 1
        for l, (W, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ W + b
            zs.append(z)
            a = z if l == last else self._act(z)
            activations.append(a)

        if self.task == "regression":
            t = np.asarray(y, dtype=float).reshape(a.shape)
            loss = float(0.5 * np.mean(np.sum((a - t) ** 2, axis=1)))
            delta = (a - t) / n
        else:
            probs = _softmax(a)
            yi = np.asarray(y, dtype=int)
            picked = probs[np.arange(n), yi]
            loss = float(-np.mean(np.log(np.clip(picked, 1e-300, None))))
            delta = probs.copy()
            delta[np.arange(n), yi] -= 1.0
            delta /= n

        grads_w = [np.zeros_like(W) for W in self.weights]
        grads_b = [np.zeros_like(b) for b in self.biases]
        for l in range(len(self.weights) - 1, -1, -1):
            grads_w[l] = activations[l].T @ delta
            grads_b[l] = delta.sum(axis=0)
            if l > 0:
                delta = (delta @ self.weights[l].T) * self._act_grad(zs[l - 1], activations[l])
        return loss, grads_w, grads_b

    def get_params(self) -> np.ndarray:
        return np.concatenate([w.ravel() for w in self.weights] + [b.ravel() for b in self.biases])

    def set_params(self, flat: np.ndarray) -> None:
        flat = np.asarray(flat, dtype=float)
        pos = 0
        for w in self.weights:
            w[...] = flat[pos : pos + w.size].reshape(w.shape)
            pos += w.size
        for b in self.biases:
            b[...] = flat[pos : pos + b.size].reshape(b.shape)
            pos += b.size

    def flat_grads(self, grads_w, grads_b) -> np.ndarray:
        return np.concatenate([g.ravel() for g in grads_w] + [g.ravel() for g in grads_b])


@dataclass(frozen=True)
class MlpModel:
    """Fitted wrapper: owns the network plus the target scaling."""

    net: MlpNetwork
    task: str
    y_min: float = 0.0
    y_span: float = 1.0
    epoch_losses: tuple[float, ...] = ()

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = self.net.forward(np.asarray(X, dtype=float))
        if self.task == "regression":
            return out[:, 0] * self.y_span + self.y_min
        raise ValidationError("use predict_confidence for classification")

    def predict_confidence(self, X: np.ndarray) -> np.ndarray:
        if self.task != "classification":
            raise ValidationError("confidence output requires a classification model")
        return self.net.forward(np.asarray(X, dtype=float))


def fit_mlp(
    X,
    y,
    *,
    hidden: tuple[int, ...] = (10,),
    activation: str = "sigmoid",
    epochs: int = 500,
    rate: float = 0.1,
    batch_size: int = 16,
    seed: int = 42,
    task: str = "regression",
    n_classes: int | None = None,
) -> MlpModel:
    """Train a network; features should be standardized upstream."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if len(X) == 0:
        raise ValidationError("cannot train on an empty dataset")

    if task == "regression":
        y = y.astype(float)
        y_min = float(y.min())
        y_span = float(y.max() - y.min()) or 1.0
        targets = (y - y_min) / y_span
        out_size = 1
    elif task == "classification":
        if n_classes is None:
            raise ValidationError("classification requires n_classes")
        targets = y.astype(int)
        y_min, y_span = 0.0, 1.0
        out_size = n_classes
    else:
        raise ValidationError(f"unknown task {task!r}")

    net = MlpNetwork(
        layer_sizes=(X.shape[1], *hidden, out_size),
        activation=activation,
        task=task,
        seed=seed,
    )
    rng = np.random.default_rng([seed, 1])
    n = len(X)
    epoch_losses = []
    for epoch in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            batch = order[start : start + batch_size]
            _, grads_w, grads_b = net.loss_and_grads(X[batch], targets[batch])
            for W, g in zip(net.weights, grads_w):
                W -= rate * g
            for b, g in zip(net.biases, grads_b):
                b -= rate * g
        epoch_loss = net.loss(X, targets)
        if not np.isfinite(epoch_loss):
            raise TrainingDivergedError(
                f"training loss became non-finite at epoch {epoch}", epoch=epoch
            )
        epoch_losses.append(epoch_loss)
    return MlpModel(
        net=net, task=task, y_min=y_min, y_span=y_span, epoch_losses=tuple(epoch_losses)
    )
