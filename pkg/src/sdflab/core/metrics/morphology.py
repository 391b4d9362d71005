"""Box-kernel morphology with border-clipped neighbourhoods."""

import numpy as np
from scipy import ndimage

from sdflab.core.grid import BinaryVolume

KernelRadius = tuple[int, int, int]


def box_kernel(radius: KernelRadius) -> np.ndarray:
    """Box structuring element of half-width ``radius`` per axis.

    Examples:
        >>> box_kernel((2, 2, 2)).shape
        (5, 5, 5)
    """
    if len(radius) != 3 or any(r < 0 for r in radius):
        raise ValueError(f"Kernel radius must be three non-negative integers, got {radius}")
    return np.ones(tuple(2 * int(r) + 1 for r in radius), dtype=bool)


def dilate(mask: BinaryVolume, radius: KernelRadius) -> BinaryVolume:
    """1 where any voxel of the box neighbourhood is 1.

    Examples:
        >>> from sdflab.core.grid import GridMeta
        >>> seed = np.zeros((9, 9, 9), dtype=np.uint8); seed[4, 4, 4] = 1
        >>> dilate(BinaryVolume.of(GridMeta.of((9, 9, 9)), seed), (2, 2, 2)).count()
        125
    """
    grown = ndimage.binary_dilation(mask.mask, structure=box_kernel(radius), border_value=0)
    return BinaryVolume.of(mask.meta, grown)


def erode(mask: BinaryVolume, radius: KernelRadius) -> BinaryVolume:
    """1 where every in-grid voxel of the box neighbourhood is 1.

    Outside the grid counts as foreground, so an all-ones mask survives.
    """
    shrunk = ndimage.binary_erosion(mask.mask, structure=box_kernel(radius), border_value=1)
    return BinaryVolume.of(mask.meta, shrunk)


def contour_band(truth: BinaryVolume, radius: KernelRadius = (2, 2, 2)) -> BinaryVolume:
    """Voxels in the dilation of ``truth`` but not in its erosion."""
    band = dilate(truth, radius).mask & ~erode(truth, radius).mask
    return BinaryVolume.of(truth.meta, band)


def boundary_voxels(mask: BinaryVolume) -> BinaryVolume:
    """Foreground voxels with a background voxel in their 3x3x3 neighbourhood."""
    inner = erode(mask, (1, 1, 1)).mask
    return BinaryVolume.of(mask.meta, mask.mask & ~inner)
