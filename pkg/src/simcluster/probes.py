"""Latent-geometry probes for black-box generators.

Two properties of a well-structured latent space are probed: whether
class regions are linearly separable (multinomial logistic regression on
latent/label pairs) and whether they are convex (label stability along
latent line segments).  Both apply to any generator R^d -> R^D paired
with a labeler R^D -> {1..m}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .sampling import standard_normals, task_seed

Labeler = Callable[[np.ndarray], np.ndarray]
Generator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class LabeledLatentSet:
    """Latent points with 1-based integer class labels."""

    dim: int
    latents: np.ndarray
    labels: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        lat = np.array(self.latents, dtype=np.float64, order="C", copy=True)
        lab = np.asarray(self.labels, dtype=np.int64)
        if lat.ndim != 2 or lat.shape[1] != self.dim:
            raise ValueError("latents must be (n, dim)")
        if lab.shape != (lat.shape[0],):
            raise ValueError("labels must have one entry per latent")
        if lab.min() < 1:
            raise ValueError("labels are 1-based; found label < 1")
        if lat.shape[0] < lab.max():
            raise ValueError("need at least as many points as classes")
        lat.flags.writeable = False
        lab.flags.writeable = False
        object.__setattr__(self, "latents", lat)
        object.__setattr__(self, "labels", lab)

    @property
    def size(self) -> int:
        return self.latents.shape[0]

    @property
    def num_classes(self) -> int:
        return int(self.labels.max())


def nearest_mode_labeler(modes) -> Labeler:
    """Labeler assigning each point the 1-based index of its closest mode."""
    centers = np.asarray(modes.modes if hasattr(modes, "modes") else modes,
                         dtype=np.float64)

    def labeler(points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        diff = pts[:, None, :] - centers[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        return np.argmin(dist, axis=1) + 1

    return labeler


def label_latents(generator: Generator, labeler: Labeler, n: int, seed: int,
                  dim: int, num_classes: int | None = None) -> LabeledLatentSet:
    """Draw ``n`` seeded Gaussian latents and label their generated outputs."""
    if n < 1:
        raise ValueError("n must be >= 1")
    latents = standard_normals(seed, n, dim)
    labels = np.asarray(labeler(generator(latents)), dtype=np.int64)
    if labels.shape != (n,):
        raise ValueError("labeler must return one label per point")
    if labels.min() < 1:
        raise ValueError("labeler returned a class below 1")
    if num_classes is not None and labels.max() > num_classes:
        raise ValueError(f"labeler returned a class above {num_classes}")
    return LabeledLatentSet(dim=dim, latents=latents, labels=labels,
                            seed=seed)


@dataclass(frozen=True)
class LinearModel:
    """Multinomial logistic model: class scores are affine in the latent."""

    weights: np.ndarray  # (m, d)
    biases: np.ndarray   # (m,)
    epochs: int
    final_loss: float
    learning_rate: float

    def __post_init__(self):
        if not (np.all(np.isfinite(self.weights))
                and np.all(np.isfinite(self.biases))):
            raise ValueError("model parameters must be finite")

    def scores(self, latents: np.ndarray) -> np.ndarray:
        return latents @ self.weights.T + self.biases

    def predict(self, latents: np.ndarray) -> np.ndarray:
        """1-based class predictions (argmax scores, lowest-index ties)."""
        return np.argmax(self.scores(np.atleast_2d(latents)), axis=1) + 1


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_loss_grad(weights, biases, latents, onehot):
    """Mean cross-entropy and its gradients for the affine softmax model."""
    n = latents.shape[0]
    probs = _softmax(latents @ weights.T + biases)
    # clip only inside the log; probabilities keep their exact values
    loss = -np.mean(np.sum(onehot * np.log(np.maximum(probs, 1e-300)),
                           axis=1))
    delta = (probs - onehot) / n
    return loss, delta.T @ latents, delta.sum(axis=0)


def train_logreg(data: LabeledLatentSet, split: float = 0.8,
                 lr: float = 0.5, epochs: int = 500,
                 seed: int = 0) -> tuple[LinearModel, float]:
    """Full-batch gradient descent from zero initialization.

    The train/test split is a seeded shuffle.  Returns the fitted model
    and held-out accuracy.  A non-finite loss (learning rate too high)
    raises instead of being clipped away.
    """
    if not 0.0 < split < 1.0:
        raise ValueError("split must lie strictly between 0 and 1")
    if not lr > 0:
        raise ValueError("lr must be positive")
    m = data.num_classes
    rng = np.random.Generator(np.random.Philox(seed))
    perm = rng.permutation(data.size)
    n_train = max(1, int(round(split * data.size)))
    if n_train >= data.size:
        raise ValueError("split leaves no test points")
    train_idx, test_idx = perm[:n_train], perm[n_train:]

    X = data.latents[train_idx]
    y = data.labels[train_idx] - 1
    onehot = np.zeros((len(X), m))
    onehot[np.arange(len(X)), y] = 1.0

    W = np.zeros((m, data.dim))
    b = np.zeros(m)
    loss = np.inf
    for epoch in range(epochs):
        loss, gW, gb = softmax_loss_grad(W, b, X, onehot)
        if not np.isfinite(loss):
            raise RuntimeError(f"training diverged: non-finite loss at "
                               f"epoch {epoch} (lr={lr})")
        W -= lr * gW
        b -= lr * gb

    model = LinearModel(weights=W, biases=b, epochs=epochs,
                        final_loss=float(loss), learning_rate=lr)
    acc = float(np.mean(model.predict(data.latents[test_idx])
                        == data.labels[test_idx]))
    return model, acc


def convexity_probe(generator: Generator, labeler: Labeler, n_pairs: int,
                    n_interp: int, seed: int, dim: int,
                    max_attempts: int = 10 ** 6) -> float:
    """Label stability along latent segments between same-class points.

    Samples ``n_pairs`` latent pairs with equal labels by rejection,
    evaluates the ``n_interp`` equally spaced interior points
    ``t = k / (n_interp + 1)`` of each segment, and returns the fraction
    of interpolants whose label matches the endpoints'.
    """
    if n_interp < 1:
        raise ValueError("n_interp must be >= 1")
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")

    firsts = np.empty((n_pairs, dim))
    seconds = np.empty((n_pairs, dim))
    pair_labels = np.empty(n_pairs, dtype=np.int64)
    found = 0
    drawn = 0
    block = 0
    leftovers: dict[int, np.ndarray] = {}
    while found < n_pairs:
        if drawn >= max_attempts:
            raise RuntimeError(
                f"could not sample {n_pairs} same-label pairs within "
                f"{max_attempts} draws; some class may be too rare")
        take = min(4096, max_attempts - drawn)
        z = standard_normals(task_seed(seed, block), take, dim)
        block += 1
        drawn += take
        labels = np.asarray(labeler(generator(z)), dtype=np.int64)
        for lab in np.unique(labels):
            pts = z[labels == lab]
            if lab in leftovers:
                pts = np.concatenate([leftovers.pop(lab), pts])
            n_full = len(pts) // 2
            for p in range(n_full):
                if found >= n_pairs:
                    break
                firsts[found] = pts[2 * p]
                seconds[found] = pts[2 * p + 1]
                pair_labels[found] = lab
                found += 1
            if len(pts) % 2 and found < n_pairs:
                leftovers[lab] = pts[-1:]

    ts = np.arange(1, n_interp + 1) / (n_interp + 1)
    matches = 0
    for t in ts:
        interp = t * firsts + (1.0 - t) * seconds
        labels = np.asarray(labeler(generator(interp)), dtype=np.int64)
        matches += int((labels == pair_labels).sum())
    return matches / (n_pairs * n_interp)
