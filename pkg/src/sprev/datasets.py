"""Labeled datasets: CSV and IDX loading, culling, CSV writing.

Labels are always re-indexed to dense integers 0..n_c-1 in order of first
appearance in row order; the original label text is kept in class_names so
nothing is lost.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadMagic,
    CountMismatch,
    EmptyAfterCull,
    EmptyDataset,
    MissingLabelColumn,
    NonFiniteValue,
    NonNumericCell,
    TooManyClassesRequested,
    TruncatedFile,
)
from .rng import Xoshiro256StarStar

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


@dataclass
class LabeledDataset:
    """Numeric feature matrix plus dense integer labels.

    features: (m, n) float64, all finite.
    labels:   (m,) int64 in [0, n_c).
    class_names: original label text, indexed by dense label.
    feature_names / label_name: column headers, preserved through write_csv.
    """

    features: np.ndarray
    labels: np.ndarray
    class_names: list[str]
    feature_names: list[str] = field(default_factory=list)
    label_name: str = "label"

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if not self.feature_names:
            self.feature_names = [f"x{i}" for i in range(self.features.shape[1])]

    @property
    def num_samples(self) -> int:
        return self.features.shape[0]

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    @property
    def num_classes(self) -> int:
        return len(self.class_names)


def _reindex(raw_labels: list[str]) -> tuple[np.ndarray, list[str]]:
    """Map label strings to dense ids in order of first appearance."""
    ids: dict[str, int] = {}
    dense = np.empty(len(raw_labels), dtype=np.int64)
    for i, name in enumerate(raw_labels):
        if name not in ids:
            ids[name] = len(ids)
        dense[i] = ids[name]
    return dense, list(ids)


def load_csv(path: str, label_column: str) -> LabeledDataset:
    """Load a headered CSV whose label column may sit anywhere.

    Cells must parse as finite floats; "NaN"/"inf" parse but are rejected
    with NonFiniteValue, anything unparseable raises NonNumericCell.  Row
    numbers in errors are 1-based over data rows (the header is row 0).
    """
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset("CSV file is empty") from None
        if label_column not in header:
            raise MissingLabelColumn(label_column)
        label_idx = header.index(label_column)
        feature_names = [h for i, h in enumerate(header) if i != label_idx]

        rows: list[list[float]] = []
        raw_labels: list[str] = []
        for row_no, row in enumerate(reader, start=1):
            values = []
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                try:
                    value = float(cell)
                except ValueError:
                    raise NonNumericCell(row_no, header[i]) from None
                if not math.isfinite(value):
                    raise NonFiniteValue(row_no, header[i])
                values.append(value)
            rows.append(values)
            raw_labels.append(row[label_idx])

    if not rows:
        raise EmptyDataset()
    labels, class_names = _reindex(raw_labels)
    features = np.asarray(rows, dtype=np.float64)
    return LabeledDataset(features, labels, class_names, feature_names, label_column)


def _read_exact(fh, count: int, path: str) -> bytes:
    data = fh.read(count)
    if len(data) < count:
        raise TruncatedFile(path, count, len(data))
    return data


def load_idx(images_path: str, labels_path: str) -> LabeledDataset:
    """Load the big-endian IDX image/label pair used by MNIST-style datasets.

    Each image becomes one flat row of rows*cols pixel values; pixels stay
    in their raw 0..255 range (scaling happens later in the pipeline).
    """
    with open(images_path, "rb") as fh:
        magic, count, rows, cols = struct.unpack(">IIII", _read_exact(fh, 16, images_path))
        if magic != IMAGES_MAGIC:
            raise BadMagic(IMAGES_MAGIC, magic)
        pixel_data = _read_exact(fh, count * rows * cols, images_path)

    with open(labels_path, "rb") as fh:
        magic, label_count = struct.unpack(">II", _read_exact(fh, 8, labels_path))
        if magic != LABELS_MAGIC:
            raise BadMagic(LABELS_MAGIC, magic)
        label_data = _read_exact(fh, label_count, labels_path)

    if count != label_count:
        raise CountMismatch(count, label_count)
    if count == 0:
        raise EmptyDataset("IDX pair contains no samples")

    features = np.frombuffer(pixel_data, dtype=np.uint8).astype(np.float64)
    features = features.reshape(count, rows * cols)
    labels, class_names = _reindex([str(b) for b in label_data])
    return LabeledDataset(features, labels, class_names)


@dataclass
class CullSpec:
    """How to shrink a dataset: keep `num_classes` classes, subsampled per class."""

    num_classes: int
    subsample_fraction: float
    seed: int

    def __post_init__(self):
        if self.num_classes < 2:
            raise ValueError(f"culling must keep at least 2 classes, got {self.num_classes}")
        if not 0.0 < self.subsample_fraction <= 1.0:
            raise ValueError(f"fraction must be in (0, 1], got {self.subsample_fraction}")


def cull(ds: LabeledDataset, spec: CullSpec) -> LabeledDataset:
    """Randomly keep a few classes, then a fraction of each kept class.

    One generator seeded from spec.seed drives, in order: the class draw,
    then per drawn class (in draw order) the sample draw.  Per class,
    ceil(fraction * count) samples are kept.  Retained rows keep their
    original relative order; labels are re-indexed densely by first
    appearance in that order.
    """
    if spec.num_classes > ds.num_classes:
        raise TooManyClassesRequested(spec.num_classes, ds.num_classes)
    rng = Xoshiro256StarStar(spec.seed)
    chosen_classes = rng.sample_indices(ds.num_classes, spec.num_classes)

    keep: list[int] = []
    for class_id in chosen_classes:
        members = np.flatnonzero(ds.labels == class_id)
        count = len(members)
        # round() guards against 0.1 * 30 style float fuzz before the ceiling
        want = math.ceil(round(spec.subsample_fraction * count, 9))
        picks = rng.sample_indices(count, want)
        keep.extend(int(members[p]) for p in picks)
    if not keep:
        raise EmptyAfterCull()
    keep.sort()

    raw = [ds.class_names[ds.labels[i]] for i in keep]
    labels, class_names = _reindex(raw)
    return LabeledDataset(
        ds.features[keep].copy(),
        labels,
        class_names,
        list(ds.feature_names),
        ds.label_name,
    )


def write_csv(ds: LabeledDataset, path: str) -> None:
    """Write a dataset as CSV: feature columns first, label column last.

    Floats are written with repr so load_csv(write_csv(ds)) reproduces the
    dataset exactly.
    """
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(ds.feature_names) + [ds.label_name])
        for row, label in zip(ds.features, ds.labels):
            writer.writerow([repr(float(v)) for v in row] + [ds.class_names[label]])
