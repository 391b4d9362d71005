"""Tests for synthetic dataset generation."""

import numpy as np
import pytest
from pydantic import ValidationError

from sdflab.core.config import GeneratorConfig, ShapeSizes, SizeRange
from sdflab.core.exceptions import EmptyVoxelizationError, HeaderError, VolumeIOError
from sdflab.core.shapes import ShapeKind, voxelize
from sdflab.shell.dataset import (
    MANIFEST_NAME,
    DatasetManifest,
    ManifestEntry,
    ManifestGrid,
    draw_case,
    generate_dataset,
    load_mask,
    plan_cases,
    read_manifest,
)


@pytest.fixture
def small_config() -> GeneratorConfig:
    return GeneratorConfig(dims=(16, 16, 16), train_per_shape=1, test_per_shape=1, seed=3)


class TestPlanCases:
    """Test case ids and ordering."""

    def test_should_list_train_before_test(self):
        plan = plan_cases(GeneratorConfig(dims=(16, 16, 16), train_per_shape=2, test_per_shape=1))

        assert len(plan) == 4 * 3
        assert [split for _, split, _, _ in plan] == ["train"] * 8 + ["test"] * 4
        assert [index for _, _, _, index in plan] == list(range(12))
        assert plan[1][0] == "train-cuboid-001"
        assert plan[-1][0] == "test-cylinder-000"


class TestDrawCase:
    """Test drawing of single cases."""

    @pytest.mark.parametrize("kind", list(ShapeKind))
    def test_should_draw_reproducible_non_empty_shapes(self, kind, small_config):
        spec, volume = draw_case(kind, small_config, 5)
        again, volume_again = draw_case(kind, small_config, 5)

        assert spec == again
        assert volume == volume_again
        assert volume.count() > 0
        assert spec.kind == kind

    @pytest.mark.parametrize("kind", list(ShapeKind))
    def test_should_keep_bounding_sphere_inside_the_grid(self, kind, small_config):
        meta = small_config.meta()
        for index in range(10):
            spec, _ = draw_case(kind, small_config, index)
            reach = spec.bounding_radius()
            for axis in range(3):
                slack = max(0.45 * meta.extent[axis] - reach, 0.0)
                assert abs(spec.center[axis] - meta.center[axis]) <= slack + 1e-9

    def test_should_give_up_on_vanishing_shapes(self):
        tiny = SizeRange(low=0.0001, high=0.0001)
        config = GeneratorConfig(
            dims=(16, 16, 16),
            kinds=(ShapeKind.CUBOID,),
            sizes=ShapeSizes(cuboid=tiny),
            max_retries=2,
        )
        with pytest.raises(EmptyVoxelizationError):
            draw_case(ShapeKind.CUBOID, config, 0)


class TestGenerateDataset:
    """Test the on-disk dataset."""

    def test_should_write_every_case_and_the_manifest(self, tmp_path, small_config):
        manifest = generate_dataset(small_config, tmp_path)

        assert len(manifest.split("train")) == 4
        assert len(manifest.split("test")) == 4
        assert (tmp_path / MANIFEST_NAME).exists()
        assert read_manifest(tmp_path / MANIFEST_NAME) == manifest

    def test_should_revoxelize_from_manifest_entries(self, tmp_path, small_config):
        manifest = generate_dataset(small_config, tmp_path)
        for entry in manifest.entries:
            assert voxelize(entry.shape(), manifest.meta()) == load_mask(tmp_path, entry)

    def test_should_rewrite_identical_bytes_with_any_worker_count(self, tmp_path, small_config):
        first = generate_dataset(small_config, tmp_path / "a")
        generate_dataset(small_config, tmp_path / "b", workers=3)

        for entry in first.entries:
            a = (tmp_path / "a" / entry.path).read_bytes()
            b = (tmp_path / "b" / entry.path).read_bytes()
            assert a == b
        manifest_a = (tmp_path / "a" / MANIFEST_NAME).read_bytes()
        assert manifest_a == (tmp_path / "b" / MANIFEST_NAME).read_bytes()

    def test_should_change_with_the_seed(self, tmp_path, small_config):
        a = generate_dataset(small_config, tmp_path / "a")
        b = generate_dataset(small_config.with_seed(4), tmp_path / "b")
        masks_a = [load_mask(tmp_path / "a", e).voxels for e in a.entries]
        masks_b = [load_mask(tmp_path / "b", e).voxels for e in b.entries]
        assert not all(np.array_equal(x, y) for x, y in zip(masks_a, masks_b))


class TestManifest:
    """Test manifest validation and loading."""

    def _entry(self, case_id: str) -> ManifestEntry:
        return ManifestEntry(
            id=case_id,
            kind=ShapeKind.ELLIPSOID,
            center=(8.0, 8.0, 8.0),
            rotation=(1.0, 0.0, 0.0, 0.0),
            size=(2.0, 3.0, 4.0),
            path=f"{case_id}.vvol",
            split="train",
        )

    def test_should_reject_duplicate_ids(self):
        with pytest.raises(ValidationError):
            DatasetManifest(
                seed=0,
                grid=ManifestGrid(dims=(16, 16, 16), spacing=(1.0, 1.0, 1.0)),
                entries=[self._entry("a"), self._entry("a")],
            )

    def test_should_report_invalid_manifest(self, tmp_path):
        path = tmp_path / MANIFEST_NAME
        path.write_text('{"seed": 0}', encoding="utf-8")
        with pytest.raises(HeaderError):
            read_manifest(path)

    def test_should_report_missing_manifest(self, tmp_path):
        with pytest.raises(VolumeIOError):
            read_manifest(tmp_path / MANIFEST_NAME)
