"""Morphology, overlap scores, surface extraction and surface distances."""

from .distances import (
    SurfaceIndex,
    barycentric_samples,
    boundary_distances,
    closest_points_on_triangles,
    point_triangle_distances,
    sample_surface,
    surface_distances,
)
from .evaluation import (
    METRIC_DIRECTIONS,
    REFERENCE_RESULTS,
    ArmSummary,
    Direction,
    MetricSet,
    evaluate_case,
    gain,
    pwr_wins,
    summarize,
)
from .mesh import TriMesh, extract_surface_binary, extract_surface_sdf
from .morphology import KernelRadius, boundary_voxels, box_kernel, contour_band, dilate, erode
from .overlap import contour_dice, dice

__all__ = [
    "SurfaceIndex",
    "barycentric_samples",
    "boundary_distances",
    "closest_points_on_triangles",
    "point_triangle_distances",
    "sample_surface",
    "surface_distances",
    "METRIC_DIRECTIONS",
    "REFERENCE_RESULTS",
    "ArmSummary",
    "Direction",
    "MetricSet",
    "evaluate_case",
    "gain",
    "pwr_wins",
    "summarize",
    "TriMesh",
    "extract_surface_binary",
    "extract_surface_sdf",
    "KernelRadius",
    "boundary_voxels",
    "box_kernel",
    "contour_band",
    "dilate",
    "erode",
    "contour_dice",
    "dice",
]
