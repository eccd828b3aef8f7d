"""Primal linear SVM trained with Pegasos, plus stratified k-fold evaluation.

Pegasos step t (1-based) on a uniformly drawn example (x, y)::

    eta = 1 / (lam * t)
    w  <- (1 - eta * lam) * w + [y <w, x> < 1] * eta * y * x
    w  <- min(1, (1 / sqrt(lam)) / ||w||) * w          # optional projection

There is no bias term. Predictions are ``sign(<w, x>)`` with ``sign(0) = +1``.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import _backend
from .graph import make_rng
from .kernels import FeatureIndex

DEFAULT_LAMBDA = 1e-4
ITERATIONS_PER_SAMPLE = 100


@dataclass
class LinearModel:
    weights: np.ndarray
    lam: float
    iterations: int
    feature_index: FeatureIndex | None = None

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.weights

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0.0, 1, -1)

    def to_json(self) -> str:
        return json.dumps({
            "lambda": self.lam,
            "iterations": self.iterations,
            "feature_index": self.feature_index.to_json() if self.feature_index else None,
            "weights": [float(w) for w in self.weights],
        })

    @classmethod
    def from_json(cls, text: str) -> "LinearModel":
        obj = json.loads(text)
        index = FeatureIndex.from_json(obj["feature_index"]) if obj["feature_index"] is not None else None
        return cls(np.asarray(obj["weights"], dtype=np.float64), obj["lambda"], obj["iterations"], index)


def _check_labels(y: np.ndarray) -> None:
    values = set(np.unique(y).tolist())
    if not values <= {-1, 1}:
        raise ValueError(f"labels must be +1/-1, got {sorted(values)}")
    if len(values) < 2:
        raise ValueError("training data contains a single class")


def pegasos_train(X, y, lam: float = DEFAULT_LAMBDA, iterations: int | None = None,
                  seed=0, project: bool = True, feature_index: FeatureIndex | None = None,
                  backend=None) -> LinearModel:
    """Train a linear SVM on the rows of ``X``.

    ``iterations`` defaults to 100 steps per training sample. The sample
    order is drawn once from ``seed``, so a run is reproducible and can be
    replayed on rescaled data.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or len(X) == 0:
        raise ValueError("X must be a nonempty 2-D array")
    if len(y) != len(X):
        raise ValueError("X and y have different lengths")
    _check_labels(y)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if iterations is None:
        iterations = ITERATIONS_PER_SAMPLE * len(X)
    if iterations < 1:
        raise ValueError("iterations must be positive")
    order = make_rng(seed).integers(0, len(X), size=iterations, dtype=np.int64)
    core = _backend.get_backend(backend)
    w = core.pegasos(X, np.ascontiguousarray(y, dtype=np.float64), order, float(lam), bool(project))
    return LinearModel(np.asarray(w), float(lam), int(iterations), feature_index)


def accuracy(model: LinearModel, X, y) -> float:
    return float(np.mean(model.predict(X) == np.asarray(y)))


# --- cross-validation -------------------------------------------------------

@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def stratified_folds(y, k: int, seed=0) -> FoldPlan:
    """Shuffle each class and deal it round-robin into ``k`` folds.

    The dealing position carries over from one class to the next, so both the
    per-class and the overall fold sizes differ by at most one.
    """
    y = np.asarray(y)
    if k < 2:
        raise ValueError("need at least 2 folds")
    if len(y) < k:
        raise ValueError(f"dataset of size {len(y)} cannot be split into {k} folds")
    rng = make_rng(seed)
    assignments = np.empty(len(y), dtype=np.int64)
    offset = 0
    for cls in np.unique(y)[::-1]:
        idx = rng.permutation(np.flatnonzero(y == cls))
        assignments[idx] = (offset + np.arange(len(idx))) % k
        offset = (offset + len(idx)) % k
    return FoldPlan(k, assignments)


@dataclass
class EvalReport:
    accuracy: float
    per_fold: list[float]
    fold_sizes: list[int]
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def kfold_eval(X, y, k: int = 10, lam: float = DEFAULT_LAMBDA, iterations: int | None = None,
               seed=0, project: bool = True, backend=None) -> EvalReport:
    """Stratified k-fold accuracy of a Pegasos SVM on pre-normalized rows ``X``.

    Fold ``f`` trains with its own seed spawned from ``seed``; ``iterations``
    (default 100 per training sample) applies to each fold.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    fold_seed, *train_seeds = ss.spawn(k + 1)
    plan = stratified_folds(y, k, fold_seed)
    per_fold, sizes, correct = [], [], 0
    for f in range(k):
        tr, te = plan.train_indices(f), plan.test_indices(f)
        if len(np.unique(y[tr])) < 2:
            raise ValueError(f"training split for fold {f} contains a single class")
        model = pegasos_train(X[tr], y[tr], lam, iterations, train_seeds[f], project, backend=backend)
        hits = int(np.sum(model.predict(X[te]) == y[te]))
        correct += hits
        per_fold.append(hits / len(te))
        sizes.append(len(te))
    config = {"k": k, "lambda": lam, "iterations": iterations, "project": project}
    return EvalReport(correct / len(y), per_fold, sizes, config)


def weighted_mean(values: Sequence[float], weights: Sequence[int]) -> float:
    return float(np.dot(values, weights) / np.sum(weights))
