"""Parametric descriptions of the synthetic primitives.

Sizes are half-measures throughout: a cuboid stores half-extents, an
ellipsoid its semi-axes, a cylinder its radius and half-height, and a
rhomboid the half-lengths of its three edge vectors.
"""

import math
from enum import Enum
from typing import Annotated

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, model_validator

from sdflab.core.exceptions import InvalidShapeError
from sdflab.core.grid.meta import Vec3
from .rotation import IDENTITY, Quaternion, quaternion_norm, rotation_matrix

PositiveSize = Annotated[float, Field(gt=0, allow_inf_nan=False)]


class ShapeKind(Enum):
    """The four primitive kinds of the synthetic dataset.

    Examples:
        >>> ShapeKind.of("cylinder")
        <ShapeKind.CYLINDER: 'cylinder'>
    """

    CUBOID = "cuboid"
    RHOMBOID = "rhomboid"
    ELLIPSOID = "ellipsoid"
    CYLINDER = "cylinder"

    @classmethod
    def of(cls, value: str) -> "ShapeKind":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"Unsupported shape kind: {value}") from None


_SIZE_ARITY = {
    ShapeKind.CUBOID: 3,
    ShapeKind.RHOMBOID: 3,
    ShapeKind.ELLIPSOID: 3,
    ShapeKind.CYLINDER: 2,
}


class ShapeSpec(BaseModel, frozen=True):
    """One synthetic primitive placed in world space.

    Attributes:
        kind: Primitive kind
        center: World position of the shape's local origin
        rotation: Unit quaternion ``(w, x, y, z)`` mapping local to world axes
        size: cuboid (a, b, c) half-extents; ellipsoid (a, b, c) semi-axes;
            rhomboid (a, b, c) edge half-lengths; cylinder (r, h)
        shear: rhomboid only, two shear angles in (0, pi/2]

    Examples:
        >>> ball = ShapeSpec.ellipsoid((2.0, 2.0, 2.0))
        >>> ball.kind.value
        'ellipsoid'
        >>> ball.bounding_radius()
        2.0
        >>> from pydantic import ValidationError
        >>> import pytest
        >>> with pytest.raises(ValidationError):
        ...     ShapeSpec.cylinder(radius=1.0, half_height=-1.0)
    """

    kind: ShapeKind
    center: Vec3 = (0.0, 0.0, 0.0)
    rotation: Quaternion = IDENTITY
    size: tuple[PositiveSize, ...]
    shear: tuple[float, float] | None = None

    @model_validator(mode="after")
    def _check_parameters(self) -> "ShapeSpec":
        if abs(quaternion_norm(self.rotation) - 1.0) > 1e-9:
            raise ValueError(f"Rotation quaternion is not unit length: {self.rotation}")
        arity = _SIZE_ARITY[self.kind]
        if len(self.size) != arity:
            raise ValueError(
                f"{self.kind.value} needs {arity} size parameters, got {len(self.size)}"
            )
        if self.kind is ShapeKind.RHOMBOID:
            if self.shear is None:
                raise ValueError("rhomboid needs two shear angles")
            for angle in self.shear:
                if not (0.0 < angle <= math.pi / 2):
                    raise ValueError(f"Shear angle {angle} outside (0, pi/2]")
        elif self.shear is not None:
            raise ValueError(f"{self.kind.value} takes no shear angles")
        return self

    @classmethod
    def cuboid(
        cls,
        half_extents: tuple[float, float, float],
        center: tuple[float, float, float] = (0.0, 0.0, 0.0),
        rotation: Quaternion = IDENTITY,
    ) -> "ShapeSpec":
        return cls(kind=ShapeKind.CUBOID, center=center, rotation=rotation, size=half_extents)

    @classmethod
    def ellipsoid(
        cls,
        semi_axes: tuple[float, float, float],
        center: tuple[float, float, float] = (0.0, 0.0, 0.0),
        rotation: Quaternion = IDENTITY,
    ) -> "ShapeSpec":
        return cls(kind=ShapeKind.ELLIPSOID, center=center, rotation=rotation, size=semi_axes)

    @classmethod
    def cylinder(
        cls,
        radius: float,
        half_height: float,
        center: tuple[float, float, float] = (0.0, 0.0, 0.0),
        rotation: Quaternion = IDENTITY,
    ) -> "ShapeSpec":
        return cls(
            kind=ShapeKind.CYLINDER,
            center=center,
            rotation=rotation,
            size=(radius, half_height),
        )

    @classmethod
    def rhomboid(
        cls,
        half_edges: tuple[float, float, float],
        shear: tuple[float, float],
        center: tuple[float, float, float] = (0.0, 0.0, 0.0),
        rotation: Quaternion = IDENTITY,
    ) -> "ShapeSpec":
        return cls(
            kind=ShapeKind.RHOMBOID,
            center=center,
            rotation=rotation,
            size=half_edges,
            shear=shear,
        )

    def rotation_matrix(self) -> NDArray[np.float64]:
        return rotation_matrix(self.rotation)

    def edge_vectors(self) -> NDArray[np.float64]:
        """Rhomboid half-edge vectors as matrix columns, in the local frame.

        ``e1`` lies on x, ``e2`` is sheared from y towards x by the first
        angle and ``e3`` is sheared from z towards x by the second. Angles of
        pi/2 give a cuboid.
        """
        if self.kind is not ShapeKind.RHOMBOID or self.shear is None:
            raise InvalidShapeError(f"{self.kind.value} has no edge vectors")
        a, b, c = self.size
        alpha, beta = self.shear
        basis = np.array(
            [
                [a, b * math.cos(alpha), c * math.cos(beta)],
                [0.0, b * math.sin(alpha), 0.0],
                [0.0, 0.0, c * math.sin(beta)],
            ],
            dtype=np.float64,
        )
        if abs(np.linalg.det(basis)) < 1e-12 * a * b * c:
            raise InvalidShapeError(f"Singular rhomboid basis for shear {self.shear}")
        return basis

    def bounding_radius(self) -> float:
        """Radius of the smallest origin-centred sphere containing the shape."""
        match self.kind:
            case ShapeKind.CUBOID:
                return math.sqrt(sum(s * s for s in self.size))
            case ShapeKind.ELLIPSOID:
                return max(self.size)
            case ShapeKind.CYLINDER:
                r, h = self.size
                return math.hypot(r, h)
            case ShapeKind.RHOMBOID:
                basis = self.edge_vectors()
                signs = np.array(
                    [[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)],
                    dtype=np.float64,
                )
                corners = signs @ basis.T
                return float(np.linalg.norm(corners, axis=1).max())
        raise RuntimeError(f"Unhandled shape kind: {self.kind}")
