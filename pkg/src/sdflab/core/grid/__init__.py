"""Volume containers, grid metadata and index conventions."""

from .meta import Dims, GridMeta, Spacing, Vec3, linear_index
from .volume import (
    BinaryVolume,
    ScalarVolume,
    ThresholdSense,
    Volume,
    require_same_dims,
    threshold,
)

__all__ = [
    "Dims",
    "GridMeta",
    "Spacing",
    "Vec3",
    "linear_index",
    "BinaryVolume",
    "ScalarVolume",
    "ThresholdSense",
    "Volume",
    "require_same_dims",
    "threshold",
]
