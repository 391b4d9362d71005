"""Wavefront OBJ export of triangle meshes.

Only ``v x y z`` and 1-based ``f i j k`` lines are written; ``read_obj``
accepts the same subset and ignores comments and blank lines.
"""

import logging
from pathlib import Path

import numpy as np

from sdflab.core.exceptions import VolumeIOError
from sdflab.core.metrics import TriMesh

logger = logging.getLogger(__name__)


def format_obj(mesh: TriMesh) -> str:
    """OBJ text of a mesh.

    Examples:
        >>> mesh = TriMesh.of([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
        >>> print(format_obj(mesh), end="")
        v 0.0 0.0 0.0
        v 1.0 0.0 0.0
        v 0.0 1.0 0.0
        f 1 2 3
    """
    lines = [f"v {x!r} {y!r} {z!r}" for x, y, z in mesh.vertices.tolist()]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.triangles.tolist()]
    return "".join(line + "\n" for line in lines)


def parse_obj(text: str) -> TriMesh:
    vertices: list[list[float]] = []
    faces: list[list[int]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tag, *fields = line.split()
        match tag:
            case "v":
                vertices.append([float(f) for f in fields[:3]])
            case "f":
                # "f 1/1/1 2/2/2 3/3/3" keeps only the vertex index
                faces.append([int(f.split("/")[0]) - 1 for f in fields[:3]])
            case _:
                logger.debug("Skipping OBJ line %d: %s", number, tag)
    return TriMesh.of(
        np.asarray(vertices, dtype=np.float64).reshape(-1, 3),
        np.asarray(faces, dtype=np.int64).reshape(-1, 3),
    )


def write_obj(path: str | Path, mesh: TriMesh) -> None:
    path = Path(path)
    try:
        path.write_text(format_obj(mesh), encoding="utf-8")
    except OSError as e:
        raise VolumeIOError(path, e) from e
    logger.debug("Wrote %d triangles to %s", mesh.triangle_count, path)


def read_obj(path: str | Path) -> TriMesh:
    path = Path(path)
    try:
        return parse_obj(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise VolumeIOError(path, e) from e
