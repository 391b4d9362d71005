"""Tests for exact point-triangle distances and pooled surface distances."""

import math

import numpy as np
import pytest

from sdflab.core.exceptions import EmptyMeshError
from sdflab.core.grid import BinaryVolume, GridMeta
from sdflab.core.metrics import (
    TriMesh,
    barycentric_samples,
    boundary_distances,
    closest_points_on_triangles,
    extract_surface_binary,
    point_triangle_distances,
    sample_surface,
    surface_distances,
)
from tests.utils.volumes import box_mask


def _square(z: float, size: float = 1.0) -> TriMesh:
    return TriMesh.of(
        [[0, 0, z], [size, 0, z], [size, size, z], [0, size, z]],
        [[0, 1, 2], [0, 2, 3]],
    )


def _brute_force(a: TriMesh, b: TriMesh, samples: int) -> tuple[float, float]:
    """Every sample against every triangle of the other mesh."""
    pooled = []
    for source, target in ((a, b), (b, a)):
        points = sample_surface(source, samples)
        ta, tb, tc = target.corners()
        for p in points:
            rows = np.repeat(p[None], len(ta), axis=0)
            pooled.append(point_triangle_distances(rows, ta, tb, tc).min())
    values = np.array(pooled)
    return float(values.mean()), float(np.sqrt((values**2).mean()))


class TestClosestPoints:
    """Test the region-based closest point on a triangle."""

    def test_should_land_on_triangle_and_beat_dense_samples(self):
        rng = np.random.default_rng(0)
        n = 200
        a, b, c = (rng.normal(size=(n, 3)) for _ in range(3))
        p = rng.normal(scale=2.0, size=(n, 3))

        closest = closest_points_on_triangles(p, a, b, c)

        # barycentric coordinates of the answer
        m = np.stack([b - a, c - a], axis=2)
        coeffs = np.array(
            [np.linalg.lstsq(m[i], closest[i] - a[i], rcond=None)[0] for i in range(n)]
        )
        assert (coeffs >= -1e-7).all()
        assert (coeffs.sum(axis=1) <= 1 + 1e-7).all()

        weights = barycentric_samples(400)
        dense = (
            weights[None, :, 0, None] * a[:, None]
            + weights[None, :, 1, None] * b[:, None]
            + weights[None, :, 2, None] * c[:, None]
        )
        sampled = np.linalg.norm(dense - p[:, None], axis=2).min(axis=1)
        exact = np.linalg.norm(closest - p, axis=1)
        assert (exact <= sampled + 1e-12).all()

    @pytest.mark.parametrize(
        "point, expected",
        [
            ((-1.0, -1.0, 0.0), (0.0, 0.0, 0.0)),
            ((3.0, -1.0, 0.0), (1.0, 0.0, 0.0)),
            ((0.5, -2.0, 1.0), (0.5, 0.0, 0.0)),
            ((1.0, 1.0, 0.0), (0.5, 0.5, 0.0)),
            ((0.2, 0.3, -4.0), (0.2, 0.3, 0.0)),
        ],
        ids=["vertex-a", "vertex-b", "edge-ab", "edge-bc", "face"],
    )
    def test_should_project_into_each_region(self, point, expected):
        tri = [np.array([[0.0, 0.0, 0.0]]), np.array([[1.0, 0.0, 0.0]]), np.array([[0.0, 1.0, 0.0]])]
        closest = closest_points_on_triangles(np.array([point]), *tri)
        assert np.allclose(closest[0], expected)

    def test_should_handle_needle_triangles(self):
        a = np.array([[0.0, 0.0, 0.0]])
        b = np.array([[1.0, 0.0, 0.0]])
        c = np.array([[2.0, 1e-9, 0.0]])
        d = point_triangle_distances(np.array([[1.0, 1.0, 0.0]]), a, b, c)
        assert math.isfinite(float(d[0]))
        assert d[0] == pytest.approx(1.0, abs=1e-6)


class TestSampling:
    """Test barycentric surface samples."""

    @pytest.mark.parametrize("count", [1, 2, 3, 4, 7, 12])
    def test_should_produce_interior_weights(self, count):
        weights = barycentric_samples(count)
        assert weights.shape == (count, 3)
        assert (weights > 0).all()
        assert np.allclose(weights.sum(axis=1), 1.0)

    def test_should_reject_zero_samples(self):
        with pytest.raises(ValueError):
            barycentric_samples(0)

    def test_should_include_used_vertices_and_interior_points(self):
        mesh = _square(0.0)
        points = sample_surface(mesh, 3)
        assert len(points) == 4 + 2 * 3


class TestSurfaceDistances:
    """Test pooled symmetric ASD and RMSD."""

    def test_should_be_zero_against_itself(self):
        mesh = extract_surface_binary(box_mask((10, 10, 10), (2, 3, 2), (7, 8, 6)))
        asd, rmsd = surface_distances(mesh, mesh)
        assert asd == pytest.approx(0.0, abs=1e-9)
        assert rmsd == pytest.approx(0.0, abs=1e-9)

    def test_should_measure_separation_of_parallel_squares(self):
        asd, rmsd = surface_distances(_square(0.0, 10.0), _square(0.75, 10.0))
        assert asd == pytest.approx(0.75, abs=1e-9)
        assert rmsd == pytest.approx(0.75, abs=1e-9)

    @pytest.mark.parametrize("samples", [1, 3, 5])
    def test_should_match_brute_force_on_concentric_cubes(self, samples):
        outer = extract_surface_binary(box_mask((12, 12, 12), (2, 2, 2), (10, 10, 10)))
        inner = extract_surface_binary(box_mask((12, 12, 12), (4, 3, 4), (8, 9, 7)))

        asd, rmsd = surface_distances(outer, inner, samples)
        expected_asd, expected_rmsd = _brute_force(outer, inner, samples)

        assert asd == pytest.approx(expected_asd, rel=1e-9)
        assert rmsd == pytest.approx(expected_rmsd, rel=1e-9)
        assert rmsd >= asd

    def test_should_be_symmetric(self):
        a = extract_surface_binary(box_mask((12, 12, 12), (2, 2, 2), (9, 10, 8)))
        b = extract_surface_binary(box_mask((12, 12, 12), (3, 2, 4), (10, 9, 9)))
        assert surface_distances(a, b) == pytest.approx(surface_distances(b, a), abs=1e-12)

    def test_should_ignore_common_translation(self):
        a = extract_surface_binary(box_mask((12, 12, 12), (2, 2, 2), (9, 10, 8)))
        b = extract_surface_binary(box_mask((12, 12, 12), (3, 2, 4), (10, 9, 9)))
        offset = (3.7, -1.2, 100.5)

        moved = surface_distances(a.translated(offset), b.translated(offset))

        assert moved == pytest.approx(surface_distances(a, b), abs=1e-9)

    def test_should_name_the_empty_side(self):
        square = _square(0.0)
        with pytest.raises(EmptyMeshError) as excinfo:
            surface_distances(square, TriMesh.empty())
        assert excinfo.value.side == "b"
        with pytest.raises(EmptyMeshError) as excinfo:
            surface_distances(TriMesh.empty(), square)
        assert excinfo.value.side == "a"


class TestBoundaryDistances:
    """Test the boundary-voxel alternative."""

    def test_should_be_zero_for_identical_masks(self, cube_16):
        assert boundary_distances(cube_16, cube_16) == (0.0, 0.0)

    def test_should_measure_one_voxel_shift(self, cube_16):
        shifted = BinaryVolume.of(cube_16.meta, np.roll(cube_16.voxels, 1, axis=0))
        asd, rmsd = boundary_distances(shifted, cube_16)
        assert 0.0 < asd <= 1.0
        assert rmsd >= asd

    def test_should_reject_empty_masks(self, cube_16):
        with pytest.raises(EmptyMeshError):
            boundary_distances(BinaryVolume.zeros(GridMeta.of((16, 16, 16))), cube_16)

    def test_should_reject_mask_without_boundary(self, cube_16):
        full = BinaryVolume.of(cube_16.meta, np.ones(cube_16.meta.shape))
        with pytest.raises(EmptyMeshError) as excinfo:
            boundary_distances(full, cube_16)
        assert excinfo.value.side == "a"
