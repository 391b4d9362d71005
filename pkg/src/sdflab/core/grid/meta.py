"""Grid metadata and the voxel-index conventions shared by every module.

Voxel values are sampled at voxel centres. Voxel ``(i, j, k)`` sits at world
position ``origin + (i * sx, j * sy, k * sz)`` and has linear index
``i + nx * (j + ny * k)`` (x fastest).
"""

from typing import Annotated

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field

PositiveInt = Annotated[int, Field(ge=1)]
PositiveReal = Annotated[float, Field(gt=0, allow_inf_nan=False)]
Real = Annotated[float, Field(allow_inf_nan=False)]

Dims = tuple[PositiveInt, PositiveInt, PositiveInt]
"""Voxel counts ``(nx, ny, nz)``; every component at least 1."""

Spacing = tuple[PositiveReal, PositiveReal, PositiveReal]
"""World units per voxel along each axis; every component strictly positive."""

Vec3 = tuple[Real, Real, Real]
"""A finite world-space triple."""


def linear_index(dims: tuple[int, int, int], i: int, j: int, k: int) -> int:
    """Linear (x-fastest) index of voxel ``(i, j, k)``.

    Examples:
        >>> linear_index((4, 3, 2), 1, 2, 1)
        21
        >>> linear_index((1, 1, 1), 0, 0, 0)
        0
    """
    nx, ny, _ = dims
    return i + nx * (j + ny * k)


class GridMeta(BaseModel, frozen=True):
    """Shape, spacing and placement of a voxel grid.

    Attributes:
        dims: Voxel counts per axis
        spacing: World units per voxel per axis
        origin: World coordinate of the centre of voxel (0, 0, 0)

    Examples:
        >>> meta = GridMeta.of((4, 4, 2), spacing=(0.5, 0.5, 0.25))
        >>> meta.voxel_count
        32
        >>> meta.world_of(2, 0, 1)
        (1.0, 0.0, 0.25)
        >>> from pydantic import ValidationError
        >>> import pytest
        >>> with pytest.raises(ValidationError):
        ...     GridMeta.of((0, 4, 4))
    """

    dims: Dims
    spacing: Spacing = (1.0, 1.0, 1.0)
    origin: Vec3 = (0.0, 0.0, 0.0)

    @classmethod
    def of(
        cls,
        dims: tuple[int, int, int],
        spacing: tuple[float, float, float] = (1.0, 1.0, 1.0),
        origin: tuple[float, float, float] = (0.0, 0.0, 0.0),
    ) -> "GridMeta":
        """Create a GridMeta from plain tuples."""
        return cls(dims=dims, spacing=spacing, origin=origin)

    @property
    def voxel_count(self) -> int:
        nx, ny, nz = self.dims
        return nx * ny * nz

    @property
    def shape(self) -> tuple[int, int, int]:
        """Array shape used for voxel storage, indexed ``[i, j, k]``."""
        return (self.dims[0], self.dims[1], self.dims[2])

    @property
    def extent(self) -> tuple[float, float, float]:
        """World distance between the first and last voxel centre per axis."""
        return (
            (self.dims[0] - 1) * self.spacing[0],
            (self.dims[1] - 1) * self.spacing[1],
            (self.dims[2] - 1) * self.spacing[2],
        )

    @property
    def center(self) -> tuple[float, float, float]:
        """World coordinate of the geometric centre of the voxel lattice."""
        ex, ey, ez = self.extent
        ox, oy, oz = self.origin
        return (ox + ex / 2, oy + ey / 2, oz + ez / 2)

    def linear_index(self, i: int, j: int, k: int) -> int:
        return linear_index(self.dims, i, j, k)

    def world_of(self, i: float, j: float, k: float) -> tuple[float, float, float]:
        """World coordinate of a (possibly fractional) voxel index."""
        return (
            self.origin[0] + i * self.spacing[0],
            self.origin[1] + j * self.spacing[1],
            self.origin[2] + k * self.spacing[2],
        )

    def axis_coordinates(self, axis: int) -> NDArray[np.float64]:
        """World coordinates of voxel centres along one axis."""
        n = self.dims[axis]
        return self.origin[axis] + np.arange(n, dtype=np.float64) * self.spacing[axis]

    def with_dims(
        self,
        dims: tuple[int, int, int],
        spacing: tuple[float, float, float] | None = None,
        origin: tuple[float, float, float] | None = None,
    ) -> "GridMeta":
        return GridMeta.of(
            dims,
            spacing=self.spacing if spacing is None else spacing,
            origin=self.origin if origin is None else origin,
        )
