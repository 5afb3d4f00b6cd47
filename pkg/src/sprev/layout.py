"""Planar layout: polygon vertices and convex placement of weight rows."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    EmbedConfig,
    class_centroids,
    min_max_scale,
    similarity_matrix,
    surface_anchors,
    weight_rows,
)
from .datasets import LabeledDataset
from .errors import NonConvexRow, NumTooSmall, ShapeMismatch, TooFewClasses


def lin_space(start: float, stop: float, num: int) -> np.ndarray:
    """num evenly spaced values from start to stop inclusive, step (stop-start)/(num-1)."""
    if num < 2:
        raise NumTooSmall(num)
    step = (stop - start) / (num - 1)
    out = start + step * np.arange(num, dtype=np.float64)
    # Pin the endpoints; accumulated rounding must not nudge them.
    out[0] = start
    out[-1] = stop
    return out


@dataclass
class Polygon:
    """Vertices of a regular polygon on the unit circle, one per class."""

    vertices: np.ndarray  # (n_c, 2), row c at angle 2*pi*c / n_c

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]


def make_polygon(num_classes: int) -> Polygon:
    """Regular num_classes-gon inscribed in the unit circle.

    Vertex c sits at angle 2*pi*c / num_classes, so vertex 0 is always
    (1, 0) and no vertex is duplicated.  Two classes give a digon, a
    segment from (1, 0) to (-1, 0), which is a legal layout here.
    """
    if num_classes < 2:
        raise TooFewClasses(num_classes)
    angles = 2.0 * math.pi * np.arange(num_classes) / num_classes
    return Polygon(np.column_stack([np.cos(angles), np.sin(angles)]))


def convex_combination(weights: np.ndarray, polygon: Polygon) -> np.ndarray:
    """Map each convex weight row to a point: weights @ vertices.

    Every output lies in the polygon's convex hull.  Rows are checked for
    convexity (nonnegative, sum 1 within 1e-12) before multiplying.
    """
    weights = np.asarray(weights, dtype=np.float64)
    if weights.ndim != 2 or weights.shape[1] != polygon.num_vertices:
        raise ShapeMismatch(
            f"weights shape {weights.shape} does not match {polygon.num_vertices} vertices"
        )
    sums = weights.sum(axis=1)
    bad_sum = np.abs(sums - 1.0) > 1e-12
    if np.any(bad_sum):
        row = int(np.flatnonzero(bad_sum)[0])
        raise NonConvexRow(row, f"sum {sums[row]!r}")
    if np.any(weights < 0.0):
        row = int(np.flatnonzero((weights < 0.0).any(axis=1))[0])
        raise NonConvexRow(row, "negative entry")
    return weights @ polygon.vertices


@dataclass
class Embedding2D:
    """Final 2-D embedding: one point per sample, inside the class polygon."""

    points: np.ndarray  # (m, 2)
    polygon: Polygon
    labels: np.ndarray
    class_names: list[str]


def embed(ds: LabeledDataset, cfg: EmbedConfig | None = None) -> Embedding2D:
    """Run the full pipeline: scale, anchor classes on the sphere, place points.

    Deterministic: equal dataset and config give bit-equal output.  Needs
    at least 2 classes and at least one sample in each.
    """
    if cfg is None:
        cfg = EmbedConfig()
    if ds.num_classes < 2:
        raise TooFewClasses(ds.num_classes)
    sds = min_max_scale(ds)
    centroids = class_centroids(sds)
    anchors = surface_anchors(centroids)
    sim = similarity_matrix(sds, anchors, cfg.metric)
    weights = weight_rows(sim, cfg)
    polygon = make_polygon(ds.num_classes)
    points = convex_combination(weights, polygon)
    return Embedding2D(points, polygon, ds.labels.copy(), list(ds.class_names))
