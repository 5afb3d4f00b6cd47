"""Core embedding pipeline: scale, centroids, sphere anchors, weights.

The geometry: scaled data lives in the unit hypercube [0, 1]^n, whose
circumscribing hypersphere has center (0.5, ..., 0.5) and radius sqrt(n)/2
(half the principal diagonal).  Class centroids are pushed radially onto
that sphere; per-sample distances to the pushed anchors become convex
weight rows over the classes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .datasets import LabeledDataset
from .errors import CentroidAtCenter, DimensionMismatch, EmptyClass
from .metrics import MetricKind, distances_to_anchors


@dataclass
class ScaledDataset:
    """Per-feature min-max scaled copy of a dataset, all values in [0, 1]."""

    features: np.ndarray
    labels: np.ndarray
    class_names: list[str]
    column_min: np.ndarray
    column_max: np.ndarray

    @property
    def num_classes(self) -> int:
        return len(self.class_names)


@dataclass
class BoundingBall:
    center: np.ndarray
    radius: float


@dataclass
class SurfaceAnchors:
    """One anchor per class, all on the bounding ball's surface."""

    anchors: np.ndarray  # (n_c, n), row c belongs to class c
    ball: BoundingBall


@dataclass
class SimilarityMatrix:
    values: np.ndarray  # (m, n_c) anchor distances
    metric: MetricKind


class WeightKernel(Enum):
    INVERSE_DISTANCE = "inverse"
    SOFTMAX_NEG_DISTANCE = "softmax"

    @classmethod
    def from_name(cls, name: str) -> "WeightKernel":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unsupported kernel {name!r}")


@dataclass
class EmbedConfig:
    """Knobs for the embedding pipeline.

    epsilon regularizes the inverse-distance kernel; temperature scales the
    softmax kernel.  The seed is carried for provenance and CLI plumbing;
    the pipeline itself is deterministic and never draws from it.
    """

    metric: MetricKind = MetricKind.EUCLIDEAN
    kernel: WeightKernel = WeightKernel.INVERSE_DISTANCE
    epsilon: float = 1e-12
    temperature: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.temperature <= 0.0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")


def min_max_scale(ds: LabeledDataset) -> ScaledDataset:
    """Scale each feature column to [0, 1] over its observed range.

    Constant columns carry no spread information; they map to 0.0 and a
    warning names them so silent data problems surface.
    """
    lo = ds.features.min(axis=0)
    hi = ds.features.max(axis=0)
    span = hi - lo
    constant = span == 0.0
    if np.any(constant):
        names = ", ".join(ds.feature_names[i] for i in np.flatnonzero(constant))
        warnings.warn(f"constant feature column(s) scaled to 0.0: {names}")
    safe_span = np.where(constant, 1.0, span)
    scaled = (ds.features - lo) / safe_span
    scaled[:, constant] = 0.0
    return ScaledDataset(scaled, ds.labels.copy(), list(ds.class_names), lo, hi)


def class_centroids(sds: ScaledDataset) -> np.ndarray:
    """(n_c, n) matrix of per-class feature means, in class id order."""
    n_c = sds.num_classes
    out = np.empty((n_c, sds.features.shape[1]), dtype=np.float64)
    for c in range(n_c):
        members = sds.labels == c
        if not np.any(members):
            raise EmptyClass(c)
        out[c] = sds.features[members].mean(axis=0)
    return out


def surface_anchors(centroids: np.ndarray, n: int | None = None) -> SurfaceAnchors:
    """Push each centroid radially from the hypercube center onto the sphere.

    The sphere circumscribes [0, 1]^n: center (0.5, ..., 0.5), radius
    sqrt(n)/2.  A centroid at the exact center has no direction to push
    along and raises CentroidAtCenter.
    """
    centroids = np.asarray(centroids, dtype=np.float64)
    if n is None:
        n = centroids.shape[1]
    elif n != centroids.shape[1]:
        raise DimensionMismatch(n, centroids.shape[1])
    center = np.full(n, 0.5)
    radius = math.sqrt(n) / 2.0
    offsets = centroids - center
    norms = np.sqrt(np.sum(offsets**2, axis=1))
    anchors = np.empty_like(centroids)
    for c, norm in enumerate(norms):
        if norm <= 1e-12:
            raise CentroidAtCenter(c)
        # (offset * radius) / norm, not offset * (radius / norm): the former
        # cancels exactly when the centroid offset is axis-aligned, landing
        # anchors on cube corners instead of a few ulps away.
        anchors[c] = center + (offsets[c] * radius) / norm
    return SurfaceAnchors(anchors, BoundingBall(center, radius))


def similarity_matrix(
    sds: ScaledDataset, anchors: SurfaceAnchors, metric: MetricKind
) -> SimilarityMatrix:
    """Distance from every scaled sample to every class anchor."""
    if anchors.anchors.shape[1] != sds.features.shape[1]:
        raise DimensionMismatch(anchors.anchors.shape[1], sds.features.shape[1])
    return SimilarityMatrix(distances_to_anchors(sds.features, anchors.anchors, metric), metric)


def weight_rows(sim: SimilarityMatrix, cfg: EmbedConfig) -> np.ndarray:
    """Convert anchor distances into convex weight rows (near anchor = heavy).

    Inverse kernel: w = 1 / (d + epsilon), then row-normalize.  Softmax
    kernel: w = exp(-d / temperature) with the row max shifted out first
    for overflow safety, then row-normalize.  Every row is nonnegative and
    sums to 1 up to rounding.
    """
    d = sim.values
    if cfg.kernel is WeightKernel.INVERSE_DISTANCE:
        w = 1.0 / (d + cfg.epsilon)
    else:
        z = -d / cfg.temperature
        w = np.exp(z - z.max(axis=1, keepdims=True))
    return w / w.sum(axis=1, keepdims=True)
