"""Distance metrics between feature vectors."""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DimensionMismatch, ZeroVectorCosine


class MetricKind(Enum):
    EUCLIDEAN = "euclidean"
    MANHATTAN = "manhattan"
    COSINE = "cosine"

    @classmethod
    def from_name(cls, name: str) -> "MetricKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unsupported metric {name!r}")


def dist(kind: MetricKind, u: np.ndarray, v: np.ndarray) -> float:
    """Distance between two vectors under the chosen metric.

    Raises DimensionMismatch on unequal lengths and ZeroVectorCosine when
    cosine distance meets a zero vector.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(u.shape[-1], v.shape[-1])
    if kind is MetricKind.EUCLIDEAN:
        return float(np.sqrt(np.sum((u - v) ** 2)))
    if kind is MetricKind.MANHATTAN:
        return float(np.sum(np.abs(u - v)))
    nu = float(np.sqrt(np.sum(u * u)))
    nv = float(np.sqrt(np.sum(v * v)))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVectorCosine()
    # Clamp away rounding excursions so the result stays in [0, 2].
    return float(min(2.0, max(0.0, 1.0 - float(np.dot(u, v)) / (nu * nv))))


def distances_to_anchors(points: np.ndarray, anchors: np.ndarray, kind: MetricKind) -> np.ndarray:
    """(m, c) matrix where entry [i, j] = dist(kind, points[i], anchors[j]).

    Computed one anchor at a time with the same operations as dist(), so
    entries agree with scalar calls to the last bit.
    """
    points = np.asarray(points, dtype=np.float64)
    anchors = np.asarray(anchors, dtype=np.float64)
    if points.shape[1] != anchors.shape[1]:
        raise DimensionMismatch(points.shape[1], anchors.shape[1])
    m, c = points.shape[0], anchors.shape[0]
    out = np.empty((m, c), dtype=np.float64)
    if kind is MetricKind.EUCLIDEAN:
        for j in range(c):
            out[:, j] = np.sqrt(np.sum((points - anchors[j]) ** 2, axis=1))
        return out
    if kind is MetricKind.MANHATTAN:
        for j in range(c):
            out[:, j] = np.sum(np.abs(points - anchors[j]), axis=1)
        return out
    point_norms = np.sqrt(np.sum(points * points, axis=1))
    if np.any(point_norms == 0.0):
        raise ZeroVectorCosine()
    for j in range(c):
        na = float(np.sqrt(np.sum(anchors[j] * anchors[j])))
        if na == 0.0:
            raise ZeroVectorCosine()
        out[:, j] = 1.0 - (points @ anchors[j]) / (point_norms * na)
    np.clip(out, 0.0, 2.0, out=out)
    return out
