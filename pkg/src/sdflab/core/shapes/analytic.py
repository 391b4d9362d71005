"""Closed-form signed distances for cuboids and cylinders.

These serve as oracles for the discrete transform in ``sdflab.core.sdt``.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sdflab.core.exceptions import InvalidShapeError
from sdflab.core.grid import GridMeta, ScalarVolume
from .membership import _SLAB_VOXELS, to_local, voxel_centers
from .spec import ShapeKind, ShapeSpec


def analytic_distance(spec: ShapeSpec, points: ArrayLike) -> NDArray[np.float64]:
    """Exact signed distance at world points; negative inside.

    Examples:
        >>> box = ShapeSpec.cuboid((1.0, 1.0, 1.0))
        >>> analytic_distance(box, [[0.0, 0.0, 0.0], [2.0, 2.0, 2.0]]).round(12).tolist()
        [-1.0, 1.732050807569]
    """
    local = to_local(spec, points)
    match spec.kind:
        case ShapeKind.CUBOID:
            q = np.abs(local) - np.asarray(spec.size, dtype=np.float64)
            outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
            interior = np.minimum(q.max(axis=-1), 0.0)
            return outside + interior
        case ShapeKind.CYLINDER:
            r, h = spec.size
            radial = np.hypot(local[..., 0], local[..., 1]) - r
            axial = np.abs(local[..., 2]) - h
            e = np.stack([radial, axial], axis=-1)
            outside = np.linalg.norm(np.maximum(e, 0.0), axis=-1)
            interior = np.minimum(np.maximum(radial, axial), 0.0)
            return outside + interior
    raise InvalidShapeError(
        f"No closed-form signed distance for {spec.kind.value}; "
        "only cuboid and cylinder are supported"
    )


def analytic_sdf(spec: ShapeSpec, meta: GridMeta) -> ScalarVolume:
    """Sample the exact signed distance at every voxel centre."""
    if spec.kind not in (ShapeKind.CUBOID, ShapeKind.CYLINDER):
        raise InvalidShapeError(
            f"No closed-form signed distance for {spec.kind.value}"
        )
    nx, ny, nz = meta.dims
    step = max(1, _SLAB_VOXELS // (nx * ny))
    out = np.zeros(meta.shape, dtype=np.float64)
    for k0 in range(0, nz, step):
        k1 = min(nz, k0 + step)
        out[:, :, k0:k1] = analytic_distance(spec, voxel_centers(meta, k0, k1))
    return ScalarVolume.of(meta, out)
