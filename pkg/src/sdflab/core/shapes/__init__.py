"""Synthetic primitives: descriptions, membership, voxelization and oracles."""

from .analytic import analytic_distance, analytic_sdf
from .membership import inside, inside_points, voxel_centers, voxelize
from .rotation import (
    IDENTITY,
    Quaternion,
    about_axis,
    compose,
    random_quaternion,
    rotation_matrix,
)
from .spec import ShapeKind, ShapeSpec

__all__ = [
    "ShapeKind",
    "ShapeSpec",
    "Quaternion",
    "IDENTITY",
    "about_axis",
    "compose",
    "random_quaternion",
    "rotation_matrix",
    "inside",
    "inside_points",
    "voxel_centers",
    "voxelize",
    "analytic_distance",
    "analytic_sdf",
]
