"""Unit quaternions and the rotation matrices they encode.

Quaternions are stored scalar-first as ``(w, x, y, z)``.
"""

import math

import numpy as np
from numpy.typing import NDArray

Quaternion = tuple[float, float, float, float]

IDENTITY: Quaternion = (1.0, 0.0, 0.0, 0.0)


def quaternion_norm(q: Quaternion) -> float:
    return math.sqrt(sum(c * c for c in q))


def about_axis(axis: tuple[float, float, float], angle: float) -> Quaternion:
    """Unit quaternion rotating by ``angle`` radians about ``axis``.

    Examples:
        >>> w, x, y, z = about_axis((0.0, 0.0, 2.0), math.pi)
        >>> round(w, 12), x, y, z
        (0.0, 0.0, 0.0, 1.0)
    """
    ax = np.asarray(axis, dtype=np.float64)
    length = float(np.linalg.norm(ax))
    if length == 0.0:
        raise ValueError("Rotation axis has zero length")
    s = math.sin(angle / 2) / length
    return (math.cos(angle / 2), float(ax[0] * s), float(ax[1] * s), float(ax[2] * s))


def random_quaternion(rng: np.random.Generator) -> Quaternion:
    """Draw a rotation uniformly from SO(3).

    A normalised 4D standard Gaussian is uniform on the unit 3-sphere.
    """
    while True:
        q = rng.standard_normal(4)
        norm = float(np.linalg.norm(q))
        if norm > 1e-12:
            break
    q = q / norm
    return (float(q[0]), float(q[1]), float(q[2]), float(q[3]))


def rotation_matrix(q: Quaternion) -> NDArray[np.float64]:
    """Rotation matrix of a unit quaternion (acts on column vectors).

    Examples:
        >>> m = rotation_matrix(about_axis((0.0, 0.0, 1.0), math.pi / 2))
        >>> [round(float(v), 12) + 0.0 for v in m @ np.array([1.0, 0.0, 0.0])]
        [0.0, 1.0, 0.0]
    """
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ],
        dtype=np.float64,
    )


def compose(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a * b`` (apply ``b`` first, then ``a``)."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )
