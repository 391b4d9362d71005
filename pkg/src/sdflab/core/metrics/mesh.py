"""Triangle meshes and marching-cubes surface extraction."""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from skimage import measure

from sdflab.core.exceptions import ShapeMismatchError
from sdflab.core.grid import BinaryVolume, GridMeta, ScalarVolume

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Vertices in world coordinates and triangles as vertex-index triples.

    Examples:
        >>> mesh = TriMesh.of([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
        >>> mesh.triangle_count, mesh.is_empty
        (1, False)
        >>> TriMesh.of([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 1]])
        Traceback (most recent call last):
        ...
        ValueError: Degenerate triangle with repeated vertex index
    """

    vertices: NDArray[np.float64]
    triangles: NDArray[np.int64]

    def __post_init__(self) -> None:
        vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if triangles.size and (triangles.min() < 0 or triangles.max() >= len(vertices)):
            raise ShapeMismatchError("triangle indices vs vertex count", triangles.max(), len(vertices))
        t = triangles
        if ((t[:, 0] == t[:, 1]) | (t[:, 1] == t[:, 2]) | (t[:, 0] == t[:, 2])).any():
            raise ValueError("Degenerate triangle with repeated vertex index")
        vertices.flags.writeable = False
        triangles.flags.writeable = False
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "triangles", triangles)

    @classmethod
    def of(cls, vertices, triangles) -> "TriMesh":
        return cls(vertices=np.asarray(vertices), triangles=np.asarray(triangles))

    @classmethod
    def empty(cls) -> "TriMesh":
        return cls(vertices=np.zeros((0, 3)), triangles=np.zeros((0, 3), dtype=np.int64))

    @property
    def is_empty(self) -> bool:
        return len(self.triangles) == 0

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def corners(self) -> tuple[NDArray, NDArray, NDArray]:
        """Per-triangle corner positions ``(a, b, c)``."""
        v = self.vertices[self.triangles]
        return v[:, 0], v[:, 1], v[:, 2]

    def translated(self, offset) -> "TriMesh":
        return TriMesh(vertices=self.vertices + np.asarray(offset, dtype=np.float64), triangles=self.triangles)

    def edge_use_counts(self) -> dict[tuple[int, int], int]:
        """Number of triangles bordering each undirected edge."""
        t = self.triangles
        edges = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        edges.sort(axis=1)
        unique, counts = np.unique(edges, axis=0, return_counts=True)
        return {(int(a), int(b)): int(n) for (a, b), n in zip(unique, counts)}

    def is_closed(self) -> bool:
        """True when every edge borders exactly two triangles."""
        return not self.is_empty and set(self.edge_use_counts().values()) == {2}


def _marching_cubes(values: NDArray, level: float, meta: GridMeta) -> TriMesh:
    if min(values.shape) < 2:
        return TriMesh.empty()
    lo, hi = float(values.min()), float(values.max())
    if not lo < level < hi:
        return TriMesh.empty()
    vertices, faces, _, _ = measure.marching_cubes(
        values.astype(np.float64),
        level=level,
        spacing=meta.spacing,
        method="lewiner",
        allow_degenerate=False,
    )
    vertices = vertices + np.asarray(meta.origin)
    repeated = (faces[:, 0] == faces[:, 1]) | (faces[:, 1] == faces[:, 2]) | (faces[:, 0] == faces[:, 2])
    faces = faces[~repeated]
    logger.debug("Extracted %d triangles at level %g", len(faces), level)
    return TriMesh(vertices=vertices, triangles=faces)


def extract_surface_binary(mask: BinaryVolume) -> TriMesh:
    """Surface at the 0.5 level of the mask viewed as 0/1 scalars."""
    return _marching_cubes(mask.voxels, 0.5, mask.meta)


def extract_surface_sdf(field: ScalarVolume) -> TriMesh:
    """Zero level set of a signed distance field.

    Examples:
        >>> meta = GridMeta.of((2, 2, 2))
        >>> values = np.ones((2, 2, 2)); values[0, 0, 0] = -1
        >>> extract_surface_sdf(ScalarVolume.of(meta, values)).triangle_count
        1
        >>> extract_surface_sdf(ScalarVolume.full(meta, 1.0)).is_empty
        True
    """
    return _marching_cubes(field.voxels, 0.0, field.meta)
