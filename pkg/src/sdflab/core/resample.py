"""Resolution bridge between full-resolution volumes and the network grid.

Both resamplers use the align-centres convention: output index ``i`` along an
axis samples the source at continuous index ``(i + 0.5) * n_src / n_dst - 0.5``.
Coordinates falling outside the source are clamped to its edge voxels.
"""

from typing import overload

import numpy as np
from numpy.typing import NDArray
from scipy import ndimage

from sdflab.core.grid import BinaryVolume, GridMeta, ScalarVolume, Volume, threshold


def _check_dims(target_dims: tuple[int, int, int]) -> tuple[int, int, int]:
    if len(target_dims) != 3 or any(int(n) < 1 for n in target_dims):
        raise ValueError(f"Target dims must be three positive integers, got {target_dims}")
    return (int(target_dims[0]), int(target_dims[1]), int(target_dims[2]))


def resampled_meta(meta: GridMeta, target_dims: tuple[int, int, int]) -> GridMeta:
    """Grid metadata of a resampled volume.

    Spacing scales by ``n_src / n_dst`` and the origin moves so that every
    output voxel centre keeps the world position it was sampled at.

    Examples:
        >>> meta = resampled_meta(GridMeta.of((8, 8, 8)), (4, 4, 4))
        >>> meta.spacing, meta.origin
        ((2.0, 2.0, 2.0), (0.5, 0.5, 0.5))
    """
    target = _check_dims(target_dims)
    spacing = []
    origin = []
    for axis in range(3):
        ratio = meta.dims[axis] / target[axis]
        spacing.append(meta.spacing[axis] * ratio)
        origin.append(meta.origin[axis] + (0.5 * ratio - 0.5) * meta.spacing[axis])
    return meta.with_dims(
        target,
        spacing=(spacing[0], spacing[1], spacing[2]),
        origin=(origin[0], origin[1], origin[2]),
    )


def source_coordinates(n_src: int, n_dst: int) -> NDArray[np.float64]:
    """Continuous source indices sampled by each output index.

    Examples:
        >>> source_coordinates(8, 4).tolist()
        [0.5, 2.5, 4.5, 6.5]
    """
    i = np.arange(n_dst, dtype=np.float64)
    return (i + 0.5) * (n_src / n_dst) - 0.5


def nearest_indices(n_src: int, n_dst: int) -> NDArray[np.int64]:
    """Nearest source index per output index, ties towards the lower index.

    Computed in integer arithmetic: ``ceil(c - 1/2)`` with
    ``c = ((2i + 1) n_src - n_dst) / (2 n_dst)``.

    Examples:
        >>> nearest_indices(8, 4).tolist()
        [0, 2, 4, 6]
        >>> nearest_indices(1, 2).tolist()
        [0, 0]
        >>> nearest_indices(4, 8).tolist()
        [0, 0, 1, 1, 2, 2, 3, 3]
    """
    i = np.arange(n_dst, dtype=np.int64)
    numerator = (2 * i + 1) * n_src - 2 * n_dst
    denominator = 2 * n_dst
    nearest = -((-numerator) // denominator)
    return np.clip(nearest, 0, n_src - 1)


def resample_trilinear(volume: ScalarVolume, target_dims: tuple[int, int, int]) -> ScalarVolume:
    """Trilinear resampling with edge replication.

    Examples:
        >>> vol = ScalarVolume.full(GridMeta.of((4, 4, 4)), 2.5)
        >>> out = resample_trilinear(vol, (2, 3, 5))
        >>> out.meta.dims, set(out.linear().tolist())
        ((2, 3, 5), {2.5})
    """
    target = _check_dims(target_dims)
    meta = volume.meta
    if target == meta.dims:
        return volume
    axes = [source_coordinates(meta.dims[a], target[a]) for a in range(3)]
    coords = np.stack(np.meshgrid(*axes, indexing="ij"), axis=0)
    values = ndimage.map_coordinates(
        volume.voxels.astype(np.float64), coords, order=1, mode="nearest", prefilter=False
    )
    return ScalarVolume.of(resampled_meta(meta, target), values)


@overload
def resample_nearest(
    volume: BinaryVolume, target_dims: tuple[int, int, int]
) -> BinaryVolume: ...
@overload
def resample_nearest(
    volume: ScalarVolume, target_dims: tuple[int, int, int]
) -> ScalarVolume: ...
def resample_nearest(volume: Volume, target_dims: tuple[int, int, int]) -> Volume:
    """Nearest-neighbour resampling; binary input stays binary."""
    target = _check_dims(target_dims)
    meta = volume.meta
    if target == meta.dims:
        return volume
    ix, iy, iz = (nearest_indices(meta.dims[a], target[a]) for a in range(3))
    values = volume.voxels[np.ix_(ix, iy, iz)]
    out_meta = resampled_meta(meta, target)
    if isinstance(volume, BinaryVolume):
        return BinaryVolume.of(out_meta, values)
    return ScalarVolume.of(out_meta, values)


def downsample_label(mask: BinaryVolume, target_dims: tuple[int, int, int]) -> BinaryVolume:
    """Coarse label: trilinear resampling of the 0/1 field, then ``> 0.5``."""
    target = _check_dims(target_dims)
    if any(t > s for t, s in zip(target, mask.meta.dims)):
        raise ValueError(
            f"Label downsampling needs target dims <= {mask.meta.dims}, got {target}"
        )
    return threshold(resample_trilinear(mask.as_scalar(), target), 0.5, "above")
