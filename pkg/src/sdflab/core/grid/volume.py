"""Immutable voxel volumes and thresholding.

Voxels are stored as numpy arrays indexed ``[i, j, k]``; flattening in
Fortran order yields the x-fastest linear order of the VVOL payload.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sdflab.core.exceptions import NonFiniteVolumeError, ShapeMismatchError
from sdflab.core.grid.meta import GridMeta

ThresholdSense = Literal["above", "below"]


def _frozen(array: NDArray) -> NDArray:
    array.flags.writeable = False
    return array


def _check_shape(meta: GridMeta, array: NDArray, what: str) -> None:
    if array.shape != meta.shape:
        raise ShapeMismatchError(what, array.shape, meta.shape)


@dataclass(frozen=True, eq=False)
class BinaryVolume:
    """Occupancy grid with values in {0, 1}.

    Examples:
        >>> meta = GridMeta.of((2, 1, 1))
        >>> vol = BinaryVolume.from_linear(meta, [0, 1])
        >>> vol.count()
        1
        >>> vol.voxels[1, 0, 0]
        np.uint8(1)
    """

    meta: GridMeta
    voxels: NDArray[np.uint8]

    def __post_init__(self) -> None:
        raw = np.asarray(self.voxels)
        _check_shape(self.meta, raw, "BinaryVolume voxels")
        if raw.size and not np.isin(raw, (0, 1)).all():
            raise ValueError("BinaryVolume values must be 0 or 1")
        object.__setattr__(self, "voxels", _frozen(raw.astype(np.uint8, copy=True)))

    @classmethod
    def of(cls, meta: GridMeta, voxels: ArrayLike) -> "BinaryVolume":
        """Create a volume from an array shaped ``meta.shape`` (bool or 0/1)."""
        return cls(meta=meta, voxels=np.asarray(voxels).astype(np.uint8))

    @classmethod
    def from_linear(cls, meta: GridMeta, values: ArrayLike) -> "BinaryVolume":
        """Create a volume from values in x-fastest linear order."""
        flat = np.asarray(values)
        if flat.size != meta.voxel_count:
            raise ShapeMismatchError("BinaryVolume payload", flat.size, meta.voxel_count)
        return cls.of(meta, flat.reshape(meta.shape, order="F"))

    @classmethod
    def zeros(cls, meta: GridMeta) -> "BinaryVolume":
        return cls.of(meta, np.zeros(meta.shape, dtype=np.uint8))

    @property
    def mask(self) -> NDArray[np.bool_]:
        return self.voxels.astype(bool)

    def linear(self) -> NDArray[np.uint8]:
        """Voxel values in x-fastest linear order."""
        return self.voxels.ravel(order="F")

    def count(self) -> int:
        return int(self.voxels.sum(dtype=np.int64))

    def complement(self) -> "BinaryVolume":
        return BinaryVolume.of(self.meta, 1 - self.voxels)

    def as_scalar(self) -> "ScalarVolume":
        """The mask viewed as a 0/1 scalar field."""
        return ScalarVolume.of(self.meta, self.voxels.astype(np.float32))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryVolume):
            return NotImplemented
        return self.meta == other.meta and np.array_equal(self.voxels, other.voxels)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class ScalarVolume:
    """Grid of finite 32-bit reals (SDFs, probabilities, regression outputs)."""

    meta: GridMeta
    voxels: NDArray[np.float32]

    def __post_init__(self) -> None:
        raw = np.asarray(self.voxels)
        _check_shape(self.meta, raw, "ScalarVolume voxels")
        values = raw.astype(np.float32, copy=True)
        if not np.isfinite(values).all():
            raise NonFiniteVolumeError("ScalarVolume values must be finite")
        object.__setattr__(self, "voxels", _frozen(values))

    @classmethod
    def of(cls, meta: GridMeta, voxels: ArrayLike) -> "ScalarVolume":
        return cls(meta=meta, voxels=np.asarray(voxels))

    @classmethod
    def from_linear(cls, meta: GridMeta, values: ArrayLike) -> "ScalarVolume":
        flat = np.asarray(values)
        if flat.size != meta.voxel_count:
            raise ShapeMismatchError("ScalarVolume payload", flat.size, meta.voxel_count)
        return cls.of(meta, flat.reshape(meta.shape, order="F"))

    @classmethod
    def full(cls, meta: GridMeta, value: float) -> "ScalarVolume":
        return cls.of(meta, np.full(meta.shape, value, dtype=np.float32))

    def linear(self) -> NDArray[np.float32]:
        return self.voxels.ravel(order="F")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScalarVolume):
            return NotImplemented
        return (
            self.meta == other.meta
            and self.voxels.shape == other.voxels.shape
            and self.voxels.tobytes() == other.voxels.tobytes()
        )

    __hash__ = None  # type: ignore[assignment]


Volume = BinaryVolume | ScalarVolume


def require_same_dims(lhs: Volume, rhs: Volume, what: str) -> None:
    """Raise ShapeMismatchError unless both volumes share dims."""
    if lhs.meta.dims != rhs.meta.dims:
        raise ShapeMismatchError(what, lhs.meta.dims, rhs.meta.dims)


def threshold(volume: ScalarVolume, level: float, sense: ThresholdSense) -> BinaryVolume:
    """Binarize a scalar field with a strict inequality.

    A voxel becomes 1 iff its value is ``> level`` (above) or ``< level``
    (below); values exactly at the level map to 0.

    Examples:
        >>> meta = GridMeta.of((3, 1, 1))
        >>> field = ScalarVolume.from_linear(meta, [-1.0, 0.0, 1.0])
        >>> threshold(field, 0.0, "below").linear().tolist()
        [1, 0, 0]
        >>> threshold(field, 0.0, "above").linear().tolist()
        [0, 0, 1]
    """
    values = volume.voxels
    match sense:
        case "above":
            mask = values > level
        case "below":
            mask = values < level
        case _:
            raise ValueError(f"Unsupported threshold sense: {sense}")
    return BinaryVolume.of(volume.meta, mask)
