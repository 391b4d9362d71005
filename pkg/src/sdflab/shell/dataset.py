"""Synthetic dataset generation and manifest persistence.

Every case draws from its own generator seeded with ``(seed, case_index)``,
so the output does not depend on the order cases are processed in.
"""

import logging
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ValidationError, model_validator

from sdflab.core.config import GeneratorConfig, SizeRange
from sdflab.core.exceptions import EmptyVoxelizationError, HeaderError, VolumeIOError
from sdflab.core.grid import BinaryVolume, GridMeta
from sdflab.core.net.spec import Seed
from sdflab.core.shapes import ShapeKind, ShapeSpec, random_quaternion, voxelize
from sdflab.shell.parallel import map_ordered
from sdflab.shell.vvol import read_binary, write_volume

logger = logging.getLogger(__name__)

Split = Literal["train", "test"]

MANIFEST_NAME = "manifest.json"


class ManifestGrid(BaseModel, frozen=True):
    dims: tuple[int, int, int]
    spacing: tuple[float, float, float]


class ManifestEntry(BaseModel, frozen=True):
    """One generated case; ``path`` is relative to the manifest directory."""

    id: str
    kind: ShapeKind
    center: tuple[float, float, float]
    rotation: tuple[float, float, float, float]
    size: tuple[float, ...]
    shear: tuple[float, float] | None = None
    path: str
    split: Split

    def shape(self) -> ShapeSpec:
        return ShapeSpec(
            kind=self.kind,
            center=self.center,
            rotation=self.rotation,
            size=self.size,
            shear=self.shear,
        )


class DatasetManifest(BaseModel, frozen=True):
    """Index of a generated dataset.

    Examples:
        >>> manifest = DatasetManifest(seed=0, grid=ManifestGrid(dims=(4, 4, 4), spacing=(1, 1, 1)), entries=[])
        >>> manifest.split("train")
        []
    """

    seed: Seed
    grid: ManifestGrid
    entries: list[ManifestEntry]

    @model_validator(mode="after")
    def _check_unique_ids(self) -> "DatasetManifest":
        seen: set[str] = set()
        for entry in self.entries:
            if entry.id in seen:
                raise ValueError(f"Duplicate case id: {entry.id}")
            seen.add(entry.id)
        return self

    def split(self, name: Split) -> list[ManifestEntry]:
        return [e for e in self.entries if e.split == name]

    def meta(self) -> GridMeta:
        return GridMeta.of(self.grid.dims, self.grid.spacing)


def _uniform(rng: np.random.Generator, size_range: SizeRange, scale: float, n: int) -> list[float]:
    return [float(v) * scale for v in rng.uniform(size_range.low, size_range.high, n)]


def draw_shape(kind: ShapeKind, config: GeneratorConfig, rng: np.random.Generator) -> ShapeSpec:
    """Random size, rotation and in-margin centre for one shape of ``kind``."""
    meta = config.meta()
    scale = min(meta.extent)
    sizes = config.sizes
    rotation = random_quaternion(rng)
    match kind:
        case ShapeKind.CUBOID:
            a, b, c = _uniform(rng, sizes.cuboid, scale, 3)
            spec = ShapeSpec.cuboid((a, b, c), rotation=rotation)
        case ShapeKind.ELLIPSOID:
            a, b, c = _uniform(rng, sizes.ellipsoid, scale, 3)
            spec = ShapeSpec.ellipsoid((a, b, c), rotation=rotation)
        case ShapeKind.CYLINDER:
            (r,) = _uniform(rng, sizes.cylinder_radius, scale, 1)
            (h,) = _uniform(rng, sizes.cylinder_half_height, scale, 1)
            spec = ShapeSpec.cylinder(r, h, rotation=rotation)
        case ShapeKind.RHOMBOID:
            a, b, c = _uniform(rng, sizes.rhomboid, scale, 3)
            low, high = config.shear_range
            alpha, beta = (float(v) for v in rng.uniform(low, high, 2))
            spec = ShapeSpec.rhomboid((a, b, c), (alpha, beta), rotation=rotation)

    reach = spec.bounding_radius()
    center = []
    for axis in range(3):
        slack = max(0.45 * meta.extent[axis] - reach, 0.0)
        center.append(meta.center[axis] + float(rng.uniform(-slack, slack)))
    return spec.model_copy(update={"center": (center[0], center[1], center[2])})


def draw_case(
    kind: ShapeKind, config: GeneratorConfig, case_index: int
) -> tuple[ShapeSpec, BinaryVolume]:
    """Draw and voxelize one case, redrawing empty voxelizations.

    Raises:
        EmptyVoxelizationError: If every attempt voxelizes to nothing
    """
    rng = np.random.default_rng([config.seed, case_index])
    meta = config.meta()
    for attempt in range(config.max_retries + 1):
        spec = draw_shape(kind, config, rng)
        volume = voxelize(spec, meta)
        if volume.count() > 0:
            return spec, volume
        logger.debug("Case %d attempt %d voxelized empty; redrawing", case_index, attempt)
    raise EmptyVoxelizationError(
        f"Case {case_index} ({kind.value}) stayed empty after {config.max_retries + 1} draws"
    )


def plan_cases(config: GeneratorConfig) -> list[tuple[str, Split, ShapeKind, int]]:
    """Case ids, splits, kinds and indices in manifest order.

    Examples:
        >>> plan = plan_cases(GeneratorConfig(dims=(16, 16, 16), train_per_shape=1, test_per_shape=0))
        >>> [case_id for case_id, _, _, _ in plan]
        ['train-cuboid-000', 'train-rhomboid-000', 'train-ellipsoid-000', 'train-cylinder-000']
    """
    plan: list[tuple[str, Split, ShapeKind, int]] = []
    counts: list[tuple[Split, int]] = [
        ("train", config.train_per_shape),
        ("test", config.test_per_shape),
    ]
    for split, count in counts:
        for kind in config.kinds:
            for n in range(count):
                plan.append((f"{split}-{kind.value}-{n:03d}", split, kind, len(plan)))
    return plan


def generate_dataset(config: GeneratorConfig, out_dir: str | Path, workers: int = 1) -> DatasetManifest:
    """Generate every case, write its VVOL file and the manifest.

    Re-running with the same config rewrites byte-identical files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def build(case: tuple[str, Split, ShapeKind, int]) -> ManifestEntry:
        case_id, split, kind, index = case
        spec, volume = draw_case(kind, config, index)
        relative = f"{case_id}.vvol"
        write_volume(out_dir / relative, volume)
        logger.debug("Generated %s with %d voxels", case_id, volume.count())
        return ManifestEntry(
            id=case_id,
            kind=kind,
            center=spec.center,
            rotation=spec.rotation,
            size=spec.size,
            shear=spec.shear,
            path=relative,
            split=split,
        )

    entries = map_ordered(build, plan_cases(config), workers)
    manifest = DatasetManifest(
        seed=config.seed,
        grid=ManifestGrid(dims=config.dims, spacing=config.spacing),
        entries=entries,
    )
    write_manifest(out_dir / MANIFEST_NAME, manifest)
    logger.info(
        "Generated %d train and %d test cases in %s",
        len(manifest.split("train")),
        len(manifest.split("test")),
        out_dir,
    )
    return manifest


def write_manifest(path: str | Path, manifest: DatasetManifest) -> None:
    path = Path(path)
    try:
        path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise VolumeIOError(path, e) from e


def read_manifest(path: str | Path) -> DatasetManifest:
    """Load a manifest written by ``write_manifest``.

    Raises:
        VolumeIOError: If the file cannot be read
        HeaderError: If the content is not a valid manifest
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise VolumeIOError(path, e) from e
    try:
        return DatasetManifest.model_validate_json(text)
    except ValidationError as e:
        raise HeaderError(path, f"invalid manifest: {e}") from e


def load_mask(manifest_dir: str | Path, entry: ManifestEntry) -> BinaryVolume:
    return read_binary(Path(manifest_dir) / entry.path)
