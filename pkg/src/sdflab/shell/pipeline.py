"""Experiment stages on disk: generate, sdf, train, predict, surface, evaluate.

Each stage reads what earlier stages wrote under ``<out>/seed-<N>/`` and can
run as its own CLI invocation.
"""

import csv
import io
import json
import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from sdflab.core.config import ExperimentConfig
from sdflab.core.exceptions import (
    EmptyMaskError,
    MissingPredictionError,
    ShapeMismatchError,
    VolumeIOError,
)
from sdflab.core.grid import BinaryVolume, ScalarVolume, threshold
from sdflab.core.metrics import MetricSet, TriMesh, evaluate_case, extract_surface_binary, extract_surface_sdf
from sdflab.core.net import Head, Prediction, TrainingCase, TrainResult, predict, train
from sdflab.core.resample import downsample_label, resample_trilinear
from sdflab.core.sdt import clamp_sdf, signed_distance
from sdflab.shell.dataset import MANIFEST_NAME, DatasetManifest, Split, generate_dataset, load_mask, read_manifest
from sdflab.shell.obj_export import write_obj
from sdflab.shell.parallel import map_ordered
from sdflab.shell.params_io import read_params, write_params
from sdflab.shell.report_generator import RunReport, build_run_report, generate_summary, write_report
from sdflab.shell.vvol import read_scalar, read_volume, write_volume

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunLayout:
    """File locations of one seed's run."""

    root: Path

    @property
    def dataset_dir(self) -> Path:
        return self.root / "dataset"

    @property
    def manifest_path(self) -> Path:
        return self.dataset_dir / MANIFEST_NAME

    @property
    def sdf_dir(self) -> Path:
        return self.root / "sdf"

    def sdf_path(self, case_id: str) -> Path:
        return self.sdf_dir / f"{case_id}.vvol"

    def arm_dir(self, arm: Head) -> Path:
        return self.root / arm.value

    def params_path(self, arm: Head) -> Path:
        return self.arm_dir(arm) / "params.vprm"

    def loss_path(self, arm: Head) -> Path:
        return self.arm_dir(arm) / "loss_history.csv"

    def raw_path(self, arm: Head, case_id: str) -> Path:
        return self.arm_dir(arm) / "predictions" / f"{case_id}.raw.vvol"

    def segmentation_path(self, arm: Head, case_id: str) -> Path:
        return self.arm_dir(arm) / "predictions" / f"{case_id}.seg.vvol"

    @property
    def report_dir(self) -> Path:
        return self.root / "report"

    @property
    def surfaces_dir(self) -> Path:
        return self.root / "surfaces"

    @property
    def timings_path(self) -> Path:
        return self.root / "timings.json"


def layout_for(config: ExperimentConfig, seed: int) -> RunLayout:
    return RunLayout(config.seed_dir(seed))


def read_timings(layout: RunLayout) -> dict[str, float]:
    if not layout.timings_path.exists():
        return {}
    return json.loads(layout.timings_path.read_text(encoding="utf-8"))


@contextmanager
def timed(layout: RunLayout, stage: str) -> Iterator[None]:
    """Record the wall-clock duration of ``stage`` in ``timings.json``."""
    start = time.perf_counter()
    yield
    timings = read_timings(layout)
    timings[stage] = time.perf_counter() - start
    layout.root.mkdir(parents=True, exist_ok=True)
    layout.timings_path.write_text(json.dumps(timings, indent=2) + "\n", encoding="utf-8")


def run_generate(config: ExperimentConfig, seed: int) -> DatasetManifest:
    layout = layout_for(config, seed)
    with timed(layout, "generate"):
        return generate_dataset(config.dataset.with_seed(seed), layout.dataset_dir, config.workers)


def load_dataset(layout: RunLayout) -> DatasetManifest:
    return read_manifest(layout.manifest_path)


def run_sdf(config: ExperimentConfig, seed: int, clamp_tau: float | None = None) -> list[Path]:
    """Signed distance file per case, optionally clamped to ``[-tau, tau]``.

    Raises:
        EmptyMaskError: Naming the case whose mask has no inside or no outside
    """
    layout = layout_for(config, seed)
    manifest = load_dataset(layout)
    layout.sdf_dir.mkdir(parents=True, exist_ok=True)

    def build(entry) -> Path:
        mask = load_mask(layout.dataset_dir, entry)
        try:
            field = signed_distance(mask)
        except EmptyMaskError as e:
            raise EmptyMaskError(f"case '{entry.id}': {e}") from e
        if clamp_tau is not None:
            field = clamp_sdf(field, clamp_tau)
        path = layout.sdf_path(entry.id)
        write_volume(path, field)
        return path

    with timed(layout, "sdf"):
        paths = map_ordered(build, manifest.entries, config.workers)
    logger.info("Wrote %d signed distance files to %s", len(paths), layout.sdf_dir)
    return paths


def network_input(config: ExperimentConfig, mask: BinaryVolume) -> ScalarVolume:
    return resample_trilinear(mask.as_scalar(), config.coarse_dims)


def regression_target(config: ExperimentConfig, layout: RunLayout, case_id: str, mask: BinaryVolume) -> ScalarVolume:
    """Coarse signed distance target in coarse-voxel units."""
    unit = config.sdf_unit()
    match config.sdf_order:
        case "full-then-downsample":
            coarse = resample_trilinear(read_scalar(layout.sdf_path(case_id)), config.coarse_dims)
        case "coarse":
            try:
                coarse = signed_distance(downsample_label(mask, config.coarse_dims))
            except EmptyMaskError as e:
                raise EmptyMaskError(f"case '{case_id}': {e}") from e
    return ScalarVolume.of(coarse.meta, coarse.voxels / unit)


def training_cases(config: ExperimentConfig, layout: RunLayout, arm: Head, limit: int | None = None) -> list[TrainingCase]:
    manifest = load_dataset(layout)
    entries = manifest.split("train")[:limit]
    cases = []
    for entry in entries:
        mask = load_mask(layout.dataset_dir, entry)
        match arm:
            case Head.PWC:
                target: BinaryVolume | ScalarVolume = downsample_label(mask, config.coarse_dims)
            case Head.PWR:
                target = regression_target(config, layout, entry.id, mask)
        cases.append(TrainingCase(case_id=entry.id, input=network_input(config, mask), target=target))
    return cases


def format_loss_history(history: list[float]) -> str:
    """CSV of ``epoch,loss`` rows.

    Examples:
        >>> print(format_loss_history([0.5, 0.25]), end="")
        epoch,loss
        1,0.5
        2,0.25
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["epoch", "loss"])
    for epoch, loss in enumerate(history, start=1):
        writer.writerow([epoch, repr(loss)])
    return buffer.getvalue()


def run_train(config: ExperimentConfig, seed: int, arm: Head, limit: int | None = None) -> TrainResult:
    """Train one arm on the train split and persist parameters and loss history.

    ``limit`` truncates the train split, e.g. to overfit a single case.
    """
    layout = layout_for(config, seed)
    spec = config.net_spec(arm)
    cases = training_cases(config, layout, arm, limit)
    logger.info("Training %s on %d cases", arm.value, len(cases))
    with timed(layout, f"train-{arm.value}"):
        result = train(spec, config.train_config(arm, seed), cases)
    layout.arm_dir(arm).mkdir(parents=True, exist_ok=True)
    write_params(layout.params_path(arm), spec, result.params)
    try:
        layout.loss_path(arm).write_text(format_loss_history(result.loss_history), encoding="utf-8")
    except OSError as e:
        raise VolumeIOError(layout.loss_path(arm), e) from e
    return result


def run_predict(config: ExperimentConfig, seed: int, arm: Head, split: Split = "test") -> list[str]:
    """Raw field and thresholded segmentation for every case of ``split``.

    Raises:
        ShapeMismatchError: If the stored network differs from the configured one
    """
    layout = layout_for(config, seed)
    manifest = load_dataset(layout)
    spec, params = read_params(layout.params_path(arm))
    expected = config.net_spec(arm)
    if spec != expected:
        raise ShapeMismatchError(f"network in {layout.params_path(arm)}", spec, expected)
    entries = manifest.split(split)
    (layout.arm_dir(arm) / "predictions").mkdir(parents=True, exist_ok=True)

    def build(entry) -> str:
        mask = load_mask(layout.dataset_dir, entry)
        prediction = predict(spec, params, mask.as_scalar(), sdf_unit=config.sdf_unit())
        write_volume(layout.raw_path(arm, entry.id), prediction.field)
        write_volume(layout.segmentation_path(arm, entry.id), prediction.segmentation())
        return entry.id

    with timed(layout, f"predict-{arm.value}"):
        ids = map_ordered(build, entries, config.workers)
    logger.info("Wrote %d %s predictions", len(ids), arm.value)
    return ids


def load_prediction(layout: RunLayout, arm: Head, case_id: str) -> Prediction:
    return Prediction(field=read_scalar(layout.raw_path(arm, case_id)), head=arm)


def run_evaluate(config: ExperimentConfig, seed: int) -> RunReport:
    """Evaluate both arms on the test split and write the report files.

    Raises:
        MissingPredictionError: Listing test cases without a raw prediction
    """
    layout = layout_for(config, seed)
    manifest = load_dataset(layout)
    entries = manifest.split("test")
    for arm in (Head.PWC, Head.PWR):
        missing = [e.id for e in entries if not layout.raw_path(arm, e.id).exists()]
        if missing:
            raise MissingPredictionError(arm.value, missing)

    def score(job: tuple[Head, object]) -> tuple[str, MetricSet]:
        arm, entry = job
        truth = load_mask(layout.dataset_dir, entry)
        metrics = evaluate_case(load_prediction(layout, arm, entry.id), truth, config.evaluation)
        logger.debug("%s %s: %s", arm.value, entry.id, metrics)
        return entry.id, metrics

    with timed(layout, "evaluate"):
        pwc = map_ordered(score, [(Head.PWC, e) for e in entries], config.workers)
        pwr = map_ordered(score, [(Head.PWR, e) for e in entries], config.workers)
    report = build_run_report(
        seed,
        config.model_dump(mode="json"),
        pwc,
        pwr,
        read_timings(layout),
    )
    write_report(layout.report_dir, report)
    return report


def surface_of(volume: BinaryVolume | ScalarVolume, arm: Head | None) -> TriMesh:
    """Binary volumes use the 0.5 level; scalar fields follow the arm rule."""
    match volume, arm:
        case BinaryVolume(), _:
            return extract_surface_binary(volume)
        case ScalarVolume(), Head.PWR:
            return extract_surface_sdf(volume)
        case ScalarVolume(), Head.PWC:
            return extract_surface_binary(threshold(volume, 0.5, "above"))
        case ScalarVolume(), None:
            raise ValueError("A scalar volume needs --arm to choose its surface rule")
    raise TypeError(f"Unsupported volume: {type(volume)}")


def run_surface(volume_path: str | Path, out_path: str | Path, arm: Head | None = None) -> TriMesh:
    """Extract the surface of a volume file and write it as OBJ.

    An empty surface is logged as a warning and written as an empty file.
    """
    mesh = surface_of(read_volume(volume_path), arm)
    if mesh.is_empty:
        logger.warning("Surface of %s is empty", volume_path)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_obj(out_path, mesh)
    return mesh


def run_experiment(config: ExperimentConfig) -> list[RunReport]:
    """Every stage for every seed, then ``summary.md`` in the output dir."""
    reports = []
    for seed in config.seeds:
        logger.info("Seed %d: generating dataset", seed)
        run_generate(config, seed)
        run_sdf(config, seed)
        for arm in (Head.PWC, Head.PWR):
            run_train(config, seed, arm)
            run_predict(config, seed, arm)
        reports.append(run_evaluate(config, seed))

    config.output_dir.mkdir(parents=True, exist_ok=True)
    summary_path = config.output_dir / "summary.md"
    summary_path.write_text(generate_summary(reports), encoding="utf-8")
    logger.info("Summary written to %s", summary_path)
    return reports
