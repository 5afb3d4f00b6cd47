"""Exception types shared across the package.

Every error raised on bad input derives from SprevError so callers (and the
CLI) can catch one base class and map it to a diagnostic.
"""

from __future__ import annotations


class SprevError(Exception):
    """Base class for all input and contract violations."""


# -- dataset loading ---------------------------------------------------------

class MissingLabelColumn(SprevError):
    def __init__(self, name: str):
        super().__init__(f"label column {name!r} not found in header")
        self.name = name


class NonNumericCell(SprevError):
    def __init__(self, row: int, col: str):
        super().__init__(f"non-numeric cell at data row {row}, column {col!r}")
        self.row = row
        self.col = col


class NonFiniteValue(SprevError):
    def __init__(self, row: int, col: str):
        super().__init__(f"non-finite value at data row {row}, column {col!r}")
        self.row = row
        self.col = col


class EmptyDataset(SprevError):
    def __init__(self, detail: str = "dataset has no rows"):
        super().__init__(detail)


class BadMagic(SprevError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"bad magic number: expected 0x{expected:08x}, got 0x{got:08x}")
        self.expected = expected
        self.got = got


class CountMismatch(SprevError):
    def __init__(self, images: int, labels: int):
        super().__init__(f"image count {images} does not match label count {labels}")
        self.images = images
        self.labels = labels


class TruncatedFile(SprevError):
    def __init__(self, path: str, needed: int, got: int):
        super().__init__(f"{path}: truncated, needed {needed} bytes, got {got}")


class TooManyClassesRequested(SprevError):
    def __init__(self, requested: int, available: int):
        super().__init__(f"requested {requested} classes but dataset has {available}")


class EmptyAfterCull(SprevError):
    def __init__(self):
        super().__init__("culling left no samples")


# -- metrics -----------------------------------------------------------------

class DimensionMismatch(SprevError):
    def __init__(self, a: int, b: int):
        super().__init__(f"dimension mismatch: {a} vs {b}")
        self.a = a
        self.b = b


class ZeroVectorCosine(SprevError):
    def __init__(self):
        super().__init__("cosine distance undefined for a zero vector")


# -- embedding core ----------------------------------------------------------

class EmptyClass(SprevError):
    def __init__(self, class_id: int):
        super().__init__(f"class {class_id} has no samples")
        self.class_id = class_id


class CentroidAtCenter(SprevError):
    def __init__(self, class_id: int):
        super().__init__(
            f"centroid of class {class_id} coincides with the hypercube center; "
            "its projection direction is undefined"
        )
        self.class_id = class_id


# -- layout ------------------------------------------------------------------

class NumTooSmall(SprevError):
    def __init__(self, num: int):
        super().__init__(f"need at least 2 points for a linear range, got {num}")


class TooFewClasses(SprevError):
    def __init__(self, count: int):
        super().__init__(f"need at least 2 classes, got {count}")


class ShapeMismatch(SprevError):
    def __init__(self, detail: str):
        super().__init__(detail)


class NonConvexRow(SprevError):
    def __init__(self, row: int, detail: str):
        super().__init__(f"weight row {row} is not a convex combination: {detail}")
        self.row = row


# -- benchmarking ------------------------------------------------------------

class ClassSmallerThanFolds(SprevError):
    def __init__(self, class_id: int, size: int, folds: int):
        super().__init__(f"class {class_id} has {size} samples, fewer than {folds} folds")
        self.class_id = class_id


class KTooLarge(SprevError):
    def __init__(self, k: int, available: int):
        super().__init__(f"k={k} exceeds the {available} training samples available")


class ConvergenceFailure(SprevError):
    def __init__(self, iterations: int):
        super().__init__(f"power iteration did not converge within {iterations} iterations")


# -- rendering ---------------------------------------------------------------

class TooFewPoints(SprevError):
    def __init__(self, count: int):
        super().__init__(f"need at least 2 points to draw a curve, got {count}")


class NonMonotonicX(SprevError):
    def __init__(self, index: int):
        super().__init__(f"x values must be strictly increasing; violation at index {index}")
        self.index = index
