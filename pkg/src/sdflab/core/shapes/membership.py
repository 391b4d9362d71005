"""Point membership tests and centre-sampled voxelization."""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sdflab.core.grid import BinaryVolume, GridMeta
from .spec import ShapeKind, ShapeSpec

# voxelize evaluates this many z-slices at a time
_SLAB_VOXELS = 1 << 21


def to_local(spec: ShapeSpec, points: ArrayLike) -> NDArray[np.float64]:
    """Map world points (``(..., 3)``) into the shape's local frame."""
    pts = np.asarray(points, dtype=np.float64)
    offset = pts - np.asarray(spec.center, dtype=np.float64)
    # row-vector form of R^-1 (p - c) = R^T (p - c)
    return offset @ spec.rotation_matrix()


def inside_points(spec: ShapeSpec, points: ArrayLike) -> NDArray[np.bool_]:
    """Closed membership test for an array of world points."""
    local = to_local(spec, points)
    x, y, z = local[..., 0], local[..., 1], local[..., 2]
    match spec.kind:
        case ShapeKind.CUBOID:
            a, b, c = spec.size
            return (np.abs(x) <= a) & (np.abs(y) <= b) & (np.abs(z) <= c)
        case ShapeKind.ELLIPSOID:
            a, b, c = spec.size
            return (x / a) ** 2 + (y / b) ** 2 + (z / c) ** 2 <= 1.0
        case ShapeKind.CYLINDER:
            r, h = spec.size
            return (x * x + y * y <= r * r) & (np.abs(z) <= h)
        case ShapeKind.RHOMBOID:
            basis = spec.edge_vectors()
            flat = local.reshape(-1, 3)
            coeffs = np.linalg.solve(basis, flat.T).T
            return (np.abs(coeffs) <= 1.0).all(axis=1).reshape(local.shape[:-1])
    raise RuntimeError(f"Unhandled shape kind: {spec.kind}")


def inside(spec: ShapeSpec, point: tuple[float, float, float]) -> bool:
    """Whether a single world point lies in the (closed) shape.

    Examples:
        >>> ball = ShapeSpec.ellipsoid((2.0, 2.0, 2.0))
        >>> inside(ball, (0.0, 0.0, 1.9))
        True
        >>> inside(ShapeSpec.cylinder(radius=1.0, half_height=2.0), (0.8, 0.7, 0.0))
        False
    """
    return bool(inside_points(spec, np.asarray(point, dtype=np.float64)[None, :])[0])


def voxel_centers(meta: GridMeta, k_start: int = 0, k_stop: int | None = None) -> NDArray:
    """World coordinates of voxel centres, shaped ``(nx, ny, nk, 3)``."""
    k_stop = meta.dims[2] if k_stop is None else k_stop
    xs = meta.axis_coordinates(0)
    ys = meta.axis_coordinates(1)
    zs = meta.axis_coordinates(2)[k_start:k_stop]
    gx, gy, gz = np.meshgrid(xs, ys, zs, indexing="ij")
    return np.stack([gx, gy, gz], axis=-1)


def voxelize(spec: ShapeSpec, meta: GridMeta) -> BinaryVolume:
    """Rasterize a shape: voxel is 1 iff its centre is inside the shape."""
    nx, ny, nz = meta.dims
    step = max(1, _SLAB_VOXELS // (nx * ny))
    out = np.zeros(meta.shape, dtype=np.uint8)
    for k0 in range(0, nz, step):
        k1 = min(nz, k0 + step)
        out[:, :, k0:k1] = inside_points(spec, voxel_centers(meta, k0, k1))
    return BinaryVolume.of(meta, out)
