"""Polygon embeddings for labeled high-dimensional data.

Pipeline: min-max scale to the unit hypercube, push class centroids onto
the circumscribing hypersphere, turn anchor distances into convex weights,
and place every sample inside a regular class polygon in the plane.
"""

from .core import EmbedConfig, WeightKernel
from .datasets import CullSpec, LabeledDataset, cull, load_csv, load_idx, write_csv
from .layout import Embedding2D, embed
from .metrics import MetricKind
from .ortho_sim import OrthoRunSpec, run_ortho_sim

__version__ = "0.1.0"

__all__ = [
    "CullSpec",
    "EmbedConfig",
    "Embedding2D",
    "LabeledDataset",
    "MetricKind",
    "OrthoRunSpec",
    "WeightKernel",
    "cull",
    "embed",
    "load_csv",
    "load_idx",
    "run_ortho_sim",
    "write_csv",
    "__version__",
]
