"""Tests for the on-disk experiment stages."""

import json

import numpy as np
import pytest

from sdflab.core.config import NetConfig
from sdflab.core.exceptions import MissingPredictionError, ShapeMismatchError
from sdflab.core.grid import BinaryVolume, ScalarVolume, threshold
from sdflab.core.net import Head
from sdflab.core.resample import downsample_label
from sdflab.core.sdt import signed_distance
from sdflab.shell.dataset import load_mask
from sdflab.shell.obj_export import read_obj
from sdflab.shell.params_io import read_params
from sdflab.shell.pipeline import (
    layout_for,
    load_dataset,
    read_timings,
    regression_target,
    run_evaluate,
    run_experiment,
    run_generate,
    run_predict,
    run_sdf,
    run_surface,
    run_train,
    surface_of,
    training_cases,
)
from sdflab.shell.report_generator import read_report
from sdflab.shell.vvol import read_binary, read_scalar, write_volume
from tests.utils.volumes import tiny_config


@pytest.fixture
def generated(tiny_experiment):
    """Dataset and signed distances for seed 0."""
    run_generate(tiny_experiment, 0)
    run_sdf(tiny_experiment, 0)
    return tiny_experiment


class TestGenerateAndSdf:
    """Test the dataset and signed distance stages."""

    def test_should_lay_out_dataset_under_seed_dir(self, tiny_experiment):
        manifest = run_generate(tiny_experiment, 0)
        layout = layout_for(tiny_experiment, 0)

        assert layout.root == tiny_experiment.output_dir / "seed-0"
        assert load_dataset(layout) == manifest
        assert len(manifest.entries) == 8
        assert "generate" in read_timings(layout)

    def test_should_write_sign_consistent_distances(self, generated):
        layout = layout_for(generated, 0)
        for entry in load_dataset(layout).entries:
            field = read_scalar(layout.sdf_path(entry.id))
            mask = load_mask(layout.dataset_dir, entry)
            assert threshold(field, 0.0, "below") == mask

    def test_should_clamp_on_request(self, generated):
        paths = run_sdf(generated, 0, clamp_tau=1.5)
        for path in paths:
            assert np.abs(read_scalar(path).voxels).max() <= 1.5


class TestTrainingTargets:
    """Test coarse inputs and targets."""

    def test_should_build_targets_per_arm(self, generated):
        layout = layout_for(generated, 0)

        pwc = training_cases(generated, layout, Head.PWC)
        pwr = training_cases(generated, layout, Head.PWR, limit=1)

        assert len(pwc) == 4 and len(pwr) == 1
        assert all(isinstance(c.target, BinaryVolume) for c in pwc)
        assert isinstance(pwr[0].target, ScalarVolume)
        assert pwc[0].input.meta.dims == pwr[0].target.meta.dims == (8, 8, 8)

    def test_should_express_coarse_targets_in_coarse_voxels(self, tiny_experiment, cube_16):
        config = tiny_experiment.model_copy(update={"sdf_order": "coarse"})
        layout = layout_for(config, 0)

        target = regression_target(config, layout, "cube", cube_16)

        coarse = downsample_label(cube_16, (8, 8, 8))
        assert threshold(target, 0.0, "below") == coarse
        # neighbours across the coarse boundary sit one coarse voxel from it
        assert target.voxels[3, 4, 4] == pytest.approx(-1.0)
        assert target.voxels[2, 4, 4] == pytest.approx(1.0)

    def test_should_downsample_full_resolution_distances(self, tiny_experiment, cube_16):
        layout = layout_for(tiny_experiment, 0)
        layout.sdf_dir.mkdir(parents=True)
        write_volume(layout.sdf_path("cube"), signed_distance(cube_16))
        target = regression_target(tiny_experiment, layout, "cube", cube_16)

        assert target.meta.dims == (8, 8, 8)
        assert target.voxels[4, 4, 4] < 0 < target.voxels[0, 0, 0]


class TestTrainPredictEvaluate:
    """Test the later stages on a tiny run."""

    def test_should_persist_params_and_loss_history(self, generated):
        layout = layout_for(generated, 0)
        result = run_train(generated, 0, Head.PWR)

        spec, params = read_params(layout.params_path(Head.PWR))
        assert spec == generated.net_spec(Head.PWR)
        assert params.count() == result.params.count()
        rows = layout.loss_path(Head.PWR).read_text().splitlines()
        assert rows[0] == "epoch,loss"
        assert len(rows) == 1 + generated.train.epochs

    def test_should_refuse_evaluation_without_predictions(self, generated):
        with pytest.raises(MissingPredictionError) as excinfo:
            run_evaluate(generated, 0)
        assert excinfo.value.arm == "pwc"
        assert len(excinfo.value.case_ids) == 4

    def test_should_refuse_params_from_another_network(self, generated):
        run_train(generated, 0, Head.PWR)
        wider = tiny_config(generated.output_dir, net=NetConfig(levels=2, base_channels=4))

        with pytest.raises(ShapeMismatchError):
            run_predict(wider, 0, Head.PWR)
        assert not (layout_for(wider, 0).arm_dir(Head.PWR) / "predictions").exists()

    def test_should_write_predictions_and_report(self, generated):
        layout = layout_for(generated, 0)
        for arm in (Head.PWC, Head.PWR):
            run_train(generated, 0, arm)
            ids = run_predict(generated, 0, arm)
            assert len(ids) == 4
            for case_id in ids:
                raw = read_scalar(layout.raw_path(arm, case_id))
                seg = read_binary(layout.segmentation_path(arm, case_id))
                assert raw.meta.dims == (16, 16, 16)
                rule = threshold(raw, 0.5, "above") if arm is Head.PWC else threshold(raw, 0.0, "below")
                assert seg == rule

        report = run_evaluate(generated, 0)

        assert len(report.arm_metrics(Head.PWC)) == len(report.arm_metrics(Head.PWR)) == 4
        assert read_report(layout.report_dir / "report.json") == report
        assert (layout.report_dir / "metrics.csv").exists()
        assert {"train-pwc", "predict-pwr", "evaluate"} <= set(
            json.loads(layout.timings_path.read_text())
        )


class TestSurface:
    """Test surface export of volume files."""

    def test_should_export_binary_surface(self, tmp_path, cube_16):
        source = tmp_path / "mask.vvol"
        write_volume(source, cube_16)
        mesh = run_surface(source, tmp_path / "out" / "mask.obj")
        assert mesh.is_closed()
        assert read_obj(tmp_path / "out" / "mask.obj").triangle_count == mesh.triangle_count

    def test_should_write_empty_file_for_empty_surface(self, tmp_path, cube_16):
        source = tmp_path / "empty.vvol"
        write_volume(source, BinaryVolume.zeros(cube_16.meta))
        mesh = run_surface(source, tmp_path / "empty.obj")
        assert mesh.is_empty
        assert (tmp_path / "empty.obj").read_text() == ""

    def test_should_require_arm_for_scalar_fields(self, cube_16):
        with pytest.raises(ValueError):
            surface_of(cube_16.as_scalar(), None)
        assert surface_of(cube_16.as_scalar(), Head.PWC).is_closed()


class TestRunExperiment:
    """Test the whole experiment end to end."""

    def test_should_write_reports_and_summary(self, tiny_experiment):
        reports = run_experiment(tiny_experiment)

        assert [r.seed for r in reports] == [0]
        summary = (tiny_experiment.output_dir / "summary.md").read_text()
        assert "# Experiment Summary" in summary
        assert "of 1 seeds" in summary

    def test_should_reproduce_metrics_byte_for_byte(self, tmp_path):
        first = tiny_config(tmp_path / "a")
        second = tiny_config(tmp_path / "b")

        run_experiment(first)
        run_experiment(second)

        csv_a = (first.seed_dir(0) / "report" / "metrics.csv").read_bytes()
        csv_b = (second.seed_dir(0) / "report" / "metrics.csv").read_bytes()
        assert csv_a == csv_b
