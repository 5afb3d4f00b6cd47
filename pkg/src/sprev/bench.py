"""k-nearest-neighbor benchmarking of 2-D projections.

The protocol is transductive: the projection is computed once on the full
dataset, then stratified cross-validation splits only the classifier's
train/test roles.  Both the class-polygon embedding and a two-component
PCA baseline share the same folds so accuracies are comparable.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import EmbedConfig
from .datasets import LabeledDataset
from .errors import ClassSmallerThanFolds, ConvergenceFailure, KTooLarge
from .layout import embed
from .rng import Xoshiro256StarStar

METHOD_SPREV = "sprev"
METHOD_PCA = "pca"


@dataclass
class BenchSpec:
    """Cross-validation plan: which methods, which k values, how many folds."""

    k_values: list[int] = field(default_factory=lambda: [5])
    folds: int = 10
    seed: int = 0
    methods: list[str] = field(default_factory=lambda: [METHOD_SPREV, METHOD_PCA])

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError(f"need at least 2 folds, got {self.folds}")
        if not self.k_values or any(k < 1 for k in self.k_values):
            raise ValueError(f"k values must be >= 1, got {self.k_values}")
        bad = [m for m in self.methods if m not in (METHOD_SPREV, METHOD_PCA)]
        if bad or not self.methods:
            raise ValueError(f"methods must be a nonempty subset of (sprev, pca), got {self.methods}")


@dataclass
class BenchResult:
    method: str
    k: int
    fold_accuracies: list[float]
    mean_accuracy: float
    std_accuracy: float  # sample standard deviation over folds
    wall_clock_embed: float  # seconds spent computing the projection


def stratified_folds(labels: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """Assign each sample a fold id in [0, folds) with balanced classes.

    Per class (in class id order) the member indices are shuffled with one
    shared generator and dealt round-robin into folds, so every fold sees
    every class.  A class smaller than the fold count cannot cover all
    folds and is rejected.
    """
    labels = np.asarray(labels)
    rng = Xoshiro256StarStar(seed)
    out = np.empty(labels.shape[0], dtype=np.int64)
    for class_id in range(int(labels.max()) + 1):
        members = [int(i) for i in np.flatnonzero(labels == class_id)]
        if len(members) < folds:
            raise ClassSmallerThanFolds(class_id, len(members), folds)
        rng.shuffle(members)
        for position, sample in enumerate(members):
            out[sample] = position % folds
    return out


def knn_predict(
    train_points: np.ndarray,
    train_labels: np.ndarray,
    query: np.ndarray,
    k: int,
    train_indices: np.ndarray | None = None,
) -> int:
    """Majority vote among the k nearest training points (Euclidean).

    Ties are deterministic: equal distances prefer the lower original
    index (train_indices, defaulting to array position); equal vote counts
    prefer the class whose voters sit closer in total, then the lower
    class id.
    """
    train_points = np.asarray(train_points, dtype=np.float64)
    train_labels = np.asarray(train_labels)
    if k > train_points.shape[0]:
        raise KTooLarge(k, train_points.shape[0])
    if train_indices is None:
        train_indices = np.arange(train_points.shape[0])
    dists = np.sqrt(np.sum((train_points - query) ** 2, axis=1))
    # lexsort: primary key distance, secondary key original index
    order = np.lexsort((np.asarray(train_indices), dists))[:k]

    votes: dict[int, int] = {}
    pull: dict[int, float] = {}
    for idx in order:
        label = int(train_labels[idx])
        votes[label] = votes.get(label, 0) + 1
        pull[label] = pull.get(label, 0.0) + float(dists[idx])
    best = max(votes.values())
    tied = [label for label, count in votes.items() if count == best]
    tied.sort(key=lambda label: (pull[label], label))
    return tied[0]


def pca2d(features: np.ndarray, seed: int = 0) -> np.ndarray:
    """Project rows onto the top two principal components, from scratch.

    Mean-centers, then runs power iteration with deflation on the sample
    covariance (tolerance 1e-10, at most 1000 iterations, start vectors
    from the seed).  Component signs are fixed by making each vector's
    largest-magnitude entry positive.  A spread-free input gives the zero
    projection and a warning instead of dividing by nothing.
    """
    features = np.asarray(features, dtype=np.float64)
    m, n = features.shape
    if m < 2:
        raise ValueError(f"PCA needs at least 2 samples, got {m}")
    centered = features - features.mean(axis=0)
    cov = (centered.T @ centered) / (m - 1)

    scale = float(np.abs(cov).max())
    if scale == 0.0:
        warnings.warn("input has no variance; PCA projection is all zeros")
        return np.zeros((m, 2))

    rng = Xoshiro256StarStar(seed)
    out = np.empty((m, 2))
    for component in range(2):
        if n == 1 and component == 1:
            # A single feature has a single direction of spread.
            out[:, 1] = 0.0
            break
        vec = _power_iteration(cov, rng)
        if vec is None:
            # Deflated matrix is effectively zero: no second direction.
            out[:, component] = 0.0
            continue
        out[:, component] = centered @ vec
        eigenvalue = float(vec @ cov @ vec)
        cov = cov - eigenvalue * np.outer(vec, vec)
    return out


def _power_iteration(
    cov: np.ndarray, rng: Xoshiro256StarStar, tol: float = 1e-10, max_iter: int = 1000
) -> np.ndarray | None:
    """Dominant eigenvector of a PSD matrix, or None if it has vanished."""
    n = cov.shape[0]
    vec = np.array([rng.random() - 0.5 for _ in range(n)])
    norm = float(np.sqrt(vec @ vec))
    vec /= norm
    for _ in range(max_iter):
        nxt = cov @ vec
        norm = float(np.sqrt(nxt @ nxt))
        if norm <= 1e-300:
            return None
        nxt /= norm
        # PSD matrix: iterate converges without sign flips.
        if float(np.sqrt(np.sum((nxt - vec) ** 2))) < tol:
            vec = nxt
            break
        vec = nxt
    else:
        raise ConvergenceFailure(max_iter)
    anchor = int(np.argmax(np.abs(vec)))
    return vec if vec[anchor] > 0 else -vec


def run_bench(ds: LabeledDataset, cfg: EmbedConfig, spec: BenchSpec) -> list[BenchResult]:
    """Cross-validate kNN accuracy on each requested 2-D projection.

    Returns one result per (method, k), methods in spec order then k in
    spec order, all sharing the fold assignment drawn from spec.seed.
    """
    fold_of = stratified_folds(ds.labels, spec.folds, spec.seed)
    min_train = min(int(np.count_nonzero(fold_of != f)) for f in range(spec.folds))
    for k in spec.k_values:
        if k > min_train:
            raise KTooLarge(k, min_train)

    projections: dict[str, tuple[np.ndarray, float]] = {}
    for method in spec.methods:
        start = time.perf_counter()
        if method == METHOD_SPREV:
            points = embed(ds, cfg).points
        else:
            points = pca2d(ds.features, seed=spec.seed)
        projections[method] = (points, time.perf_counter() - start)

    results = []
    for method in spec.methods:
        points, elapsed = projections[method]
        for k in spec.k_values:
            accuracies = []
            for f in range(spec.folds):
                train = np.flatnonzero(fold_of != f)
                test = np.flatnonzero(fold_of == f)
                hits = sum(
                    1
                    for i in test
                    if knn_predict(points[train], ds.labels[train], points[i], k, train) == ds.labels[i]
                )
                accuracies.append(hits / len(test))
            mean = float(np.mean(accuracies))
            std = float(np.std(accuracies, ddof=1))
            results.append(BenchResult(method, k, accuracies, mean, std, elapsed))
    return results
