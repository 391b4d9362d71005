"""Tests for triangle meshes and marching-cubes extraction."""

import numpy as np
import pytest

from sdflab.core.exceptions import ShapeMismatchError
from sdflab.core.grid import BinaryVolume, GridMeta, ScalarVolume
from sdflab.core.metrics import TriMesh, extract_surface_binary, extract_surface_sdf
from sdflab.core.sdt import signed_distance
from sdflab.core.shapes import ShapeSpec, about_axis, voxelize
from tests.utils.volumes import box_mask


class TestTriMesh:
    """Test mesh validation and edge bookkeeping."""

    def test_should_reject_out_of_range_indices(self):
        with pytest.raises(ShapeMismatchError):
            TriMesh.of([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 3]])

    def test_should_count_shared_edges_of_tetrahedron(self):
        mesh = TriMesh.of(
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
            [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]],
        )
        assert len(mesh.edge_use_counts()) == 6
        assert mesh.is_closed()

    def test_should_not_call_open_or_empty_meshes_closed(self):
        assert not TriMesh.of([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]]).is_closed()
        assert not TriMesh.empty().is_closed()

    def test_should_translate_vertices_only(self):
        mesh = TriMesh.of([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
        moved = mesh.translated((1.0, 2.0, 3.0))
        assert moved.vertices[1].tolist() == [2.0, 2.0, 3.0]
        assert np.array_equal(moved.triangles, mesh.triangles)


class TestExtractSurface:
    """Test marching-cubes extraction on both inputs."""

    def test_should_return_empty_mesh_for_single_signed_field(self):
        meta = GridMeta.of((4, 4, 4))
        assert extract_surface_sdf(ScalarVolume.full(meta, 2.0)).is_empty
        assert extract_surface_binary(BinaryVolume.zeros(meta)).is_empty

    def test_should_emit_one_triangle_for_single_negative_corner(self):
        values = np.ones((2, 2, 2))
        values[1, 0, 1] = -1.0
        mesh = extract_surface_sdf(ScalarVolume.of(GridMeta.of((2, 2, 2)), values))
        assert mesh.triangle_count == 1

    def test_should_interpolate_crossings_along_edges(self):
        """A linear field along x puts every vertex on its zero plane."""
        meta = GridMeta.of((6, 4, 4))
        x = np.indices(meta.shape)[0].astype(np.float64)
        mesh = extract_surface_sdf(ScalarVolume.of(meta, x - 2.3))
        assert np.allclose(mesh.vertices[:, 0], 2.3, atol=1e-6)

    def test_should_place_vertices_in_world_coordinates(self):
        meta = GridMeta.of((6, 4, 4), spacing=(0.5, 1.0, 2.0), origin=(10.0, 0.0, -4.0))
        x = np.indices(meta.shape)[0].astype(np.float64)
        mesh = extract_surface_sdf(ScalarVolume.of(meta, x - 2.5))
        assert np.allclose(mesh.vertices[:, 0], 10.0 + 2.5 * 0.5, atol=1e-6)
        assert mesh.vertices[:, 2].min() == pytest.approx(-4.0)
        assert mesh.vertices[:, 2].max() == pytest.approx(2.0)

    def test_should_approximate_ball_within_half_voxel(self):
        meta = GridMeta.of((32, 32, 32))
        center = np.array([15.3, 15.6, 15.4])
        ball = voxelize(ShapeSpec.ellipsoid((6.0, 6.0, 6.0), center=tuple(center)), meta)

        mesh = extract_surface_sdf(signed_distance(ball))

        radii = np.linalg.norm(mesh.vertices - center, axis=1)
        assert np.abs(radii - 6.0).max() <= 0.6
        assert mesh.is_closed()

    @pytest.mark.parametrize(
        "spec",
        [
            ShapeSpec.cuboid((4.2, 3.1, 5.3), center=(11.7, 12.2, 12.4), rotation=about_axis((1.0, 2.0, 0.5), 0.8)),
            ShapeSpec.cylinder(radius=4.1, half_height=5.2, center=(12.3, 11.6, 12.1), rotation=about_axis((0.0, 1.0, 1.0), 1.1)),
            ShapeSpec.ellipsoid((6.3, 4.2, 3.4), center=(12.1, 12.6, 11.8), rotation=about_axis((1.0, 0.0, 1.0), 0.4)),
        ],
        ids=["cuboid", "cylinder", "ellipsoid"],
    )
    def test_should_produce_closed_surfaces_for_primitives(self, spec):
        meta = GridMeta.of((24, 24, 24))
        mask = voxelize(spec, meta)

        assert extract_surface_sdf(signed_distance(mask)).is_closed()
        assert extract_surface_binary(mask).is_closed()

    def test_should_wrap_cube_mask_at_half_level(self):
        mask = box_mask((10, 10, 10), (3, 3, 3), (7, 7, 7))
        mesh = extract_surface_binary(mask)
        assert mesh.vertices.min() == pytest.approx(2.5)
        assert mesh.vertices.max() == pytest.approx(6.5)
        assert mesh.is_closed()
