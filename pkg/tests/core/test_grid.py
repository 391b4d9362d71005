"""Tests for grid metadata, volumes and thresholding."""

import numpy as np
import pytest
from pydantic import ValidationError

from sdflab.core.exceptions import NonFiniteVolumeError, ShapeMismatchError
from sdflab.core.grid import BinaryVolume, GridMeta, ScalarVolume, linear_index, threshold
from sdflab.core.sdt import signed_distance
from sdflab.core.shapes import ShapeSpec, voxelize


class TestGridMeta:
    """Test GridMeta validation and coordinate mapping."""

    def test_should_reject_non_positive_spacing(self):
        """Spacing components must be strictly positive."""
        with pytest.raises(ValidationError):
            GridMeta.of((4, 4, 4), spacing=(1.0, 0.0, 1.0))

    def test_should_map_indices_with_spacing_and_origin(self):
        """World position is origin plus index times spacing."""
        meta = GridMeta.of((4, 4, 4), spacing=(0.5, 0.5, 0.25), origin=(1.0, -1.0, 2.0))
        assert meta.world_of(2, 2, 4) == (2.0, 0.0, 3.0)

    def test_should_report_lattice_center(self):
        meta = GridMeta.of((5, 3, 2))
        assert meta.center == (2.0, 1.0, 0.5)

    def test_should_be_frozen(self):
        meta = GridMeta.of((2, 2, 2))
        with pytest.raises(ValidationError):
            meta.dims = (3, 3, 3)  # type: ignore[misc]


class TestBinaryVolume:
    """Test BinaryVolume construction and linear order."""

    def test_should_use_x_fastest_linear_order(self, lattice_probe):
        """Linear index of (1, 2, 1) follows i + nx * (j + ny * k)."""
        dims = (3, 4, 2)
        voxels = np.zeros(dims, dtype=np.uint8)
        voxels[1, 2, 1] = 1
        volume = BinaryVolume.of(GridMeta.of(dims), voxels)

        lattice_probe(dims, volume.linear(), volume.voxels)
        assert np.flatnonzero(volume.linear()).tolist() == [linear_index(dims, 1, 2, 1)]

    def test_should_round_trip_linear_values(self):
        meta = GridMeta.of((2, 3, 4))
        values = np.arange(24) % 2
        volume = BinaryVolume.from_linear(meta, values)
        assert volume.linear().tolist() == values.tolist()

    def test_should_reject_values_outside_zero_one(self):
        meta = GridMeta.of((2, 1, 1))
        with pytest.raises(ValueError, match="0 or 1"):
            BinaryVolume.from_linear(meta, [0, 2])

    def test_should_reject_wrong_voxel_count(self):
        meta = GridMeta.of((2, 2, 2))
        with pytest.raises(ShapeMismatchError):
            BinaryVolume.from_linear(meta, [0] * 7)

    def test_should_be_immutable(self):
        volume = BinaryVolume.zeros(GridMeta.of((2, 2, 2)))
        with pytest.raises(ValueError):
            volume.voxels[0, 0, 0] = 1

    def test_should_not_alias_caller_array(self):
        """Later writes to the source array do not reach the volume."""
        source = np.zeros((2, 2, 2), dtype=np.uint8)
        volume = BinaryVolume.of(GridMeta.of((2, 2, 2)), source)
        source[0, 0, 0] = 1
        assert volume.count() == 0

    def test_should_complement(self):
        meta = GridMeta.of((3, 1, 1))
        volume = BinaryVolume.from_linear(meta, [1, 0, 1])
        assert volume.complement().linear().tolist() == [0, 1, 0]


class TestScalarVolume:
    """Test ScalarVolume finiteness and equality."""

    def test_should_reject_nan(self):
        meta = GridMeta.of((2, 1, 1))
        with pytest.raises(NonFiniteVolumeError):
            ScalarVolume.from_linear(meta, [0.0, np.nan])

    def test_should_reject_infinity(self):
        meta = GridMeta.of((2, 1, 1))
        with pytest.raises(NonFiniteVolumeError):
            ScalarVolume.from_linear(meta, [np.inf, 0.0])

    def test_should_store_float32(self):
        volume = ScalarVolume.full(GridMeta.of((2, 2, 2)), 0.1)
        assert volume.voxels.dtype == np.float32

    def test_should_compare_bitwise(self):
        meta = GridMeta.of((2, 1, 1))
        a = ScalarVolume.from_linear(meta, [1.0, 2.0])
        b = ScalarVolume.from_linear(meta, [1.0, 2.0])
        c = ScalarVolume.from_linear(meta, [1.0, 2.5])
        assert a == b
        assert a != c


class TestThreshold:
    """Test strict-inequality thresholding."""

    def test_should_map_constant_field_above_level_to_ones(self):
        meta = GridMeta.of((3, 3, 3))
        mask = threshold(ScalarVolume.full(meta, 1.0), 0.5, "above")
        assert mask.count() == 27

    def test_should_map_values_at_level_to_zero(self):
        meta = GridMeta.of((3, 1, 1))
        field = ScalarVolume.from_linear(meta, [0.5, 0.5, 0.6])
        assert threshold(field, 0.5, "above").linear().tolist() == [0, 0, 1]

    def test_should_recover_negative_sdf_region(self):
        """Below-zero voxels of a sphere SDF are exactly the negative voxels."""
        meta = GridMeta.of((9, 9, 9))
        ball = voxelize(ShapeSpec.ellipsoid((3.2, 3.2, 3.2), center=meta.center), meta)
        sdf = signed_distance(ball)

        mask = threshold(sdf, 0.0, "below")

        assert np.array_equal(mask.mask, sdf.voxels < 0)
        assert mask == ball

    def test_should_be_stable_under_rethresholding(self):
        rng = np.random.default_rng(3)
        meta = GridMeta.of((4, 5, 6))
        field = ScalarVolume.of(meta, rng.normal(size=meta.shape))
        for level, sense in [(0.0, "below"), (0.3, "above")]:
            once = threshold(field, level, sense)
            again = threshold(once.as_scalar(), 0.5, "above")
            assert again == once

    def test_should_preserve_metadata(self):
        meta = GridMeta.of((2, 2, 2), spacing=(0.5, 0.5, 0.25), origin=(1.0, 2.0, 3.0))
        assert threshold(ScalarVolume.full(meta, 0.0), 0.0, "below").meta == meta
