"""Experiment configuration.

Every model is frozen and validated on construction; a pydantic
``ValidationError`` is the only way a bad value surfaces. Size ranges are
fractions of the smallest world extent of the full-resolution grid.
"""

import math
from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, Field, model_validator

from sdflab.core.grid import Dims, GridMeta, Spacing
from sdflab.core.net.spec import Head, NetSpec, OptimizerKind, Seed, TrainConfig
from sdflab.core.resample import resampled_meta
from sdflab.core.shapes import ShapeKind

Fraction = Annotated[float, Field(gt=0, lt=1)]
Count = Annotated[int, Field(ge=0)]

# shapes keep their bounding sphere inside the central 90% of the grid
_MARGIN_FRACTION = 0.45


class SizeRange(BaseModel, frozen=True):
    """Closed interval ``[low, high]`` sampled uniformly.

    Examples:
        >>> SizeRange(low=0.1, high=0.2).high
        0.2
        >>> from pydantic import ValidationError
        >>> import pytest
        >>> with pytest.raises(ValidationError):
        ...     SizeRange(low=0.3, high=0.2)
    """

    low: Fraction
    high: Fraction

    @model_validator(mode="after")
    def _check_order(self) -> "SizeRange":
        if self.low > self.high:
            raise ValueError(f"Size range low {self.low} exceeds high {self.high}")
        return self


class ShapeSizes(BaseModel, frozen=True):
    cuboid: SizeRange = SizeRange(low=0.07, high=0.18)
    ellipsoid: SizeRange = SizeRange(low=0.08, high=0.22)
    cylinder_radius: SizeRange = SizeRange(low=0.07, high=0.16)
    cylinder_half_height: SizeRange = SizeRange(low=0.08, high=0.20)
    rhomboid: SizeRange = SizeRange(low=0.07, high=0.14)

    def max_bounding_fraction(self, kind: ShapeKind) -> float:
        """Largest bounding radius a draw of ``kind`` can reach."""
        match kind:
            case ShapeKind.CUBOID:
                return math.sqrt(3.0) * self.cuboid.high
            case ShapeKind.ELLIPSOID:
                return self.ellipsoid.high
            case ShapeKind.CYLINDER:
                return math.hypot(self.cylinder_radius.high, self.cylinder_half_height.high)
            case ShapeKind.RHOMBOID:
                return 3.0 * self.rhomboid.high
        raise RuntimeError(f"Unhandled shape kind: {kind}")


class GeneratorConfig(BaseModel, frozen=True):
    """Synthetic dataset settings.

    Examples:
        >>> config = GeneratorConfig()
        >>> config.meta().dims, config.train_per_shape, config.test_per_shape
        ((128, 128, 128), 8, 4)
    """

    dims: Dims = (128, 128, 128)
    spacing: Spacing = (1.0, 1.0, 1.0)
    train_per_shape: Count = 8
    test_per_shape: Count = 4
    kinds: tuple[ShapeKind, ...] = (
        ShapeKind.CUBOID,
        ShapeKind.RHOMBOID,
        ShapeKind.ELLIPSOID,
        ShapeKind.CYLINDER,
    )
    sizes: ShapeSizes = ShapeSizes()
    shear_range: tuple[float, float] = (math.pi / 4, math.pi / 2)
    seed: Seed = 0
    max_retries: Annotated[int, Field(ge=0)] = 10

    @model_validator(mode="after")
    def _check_fits(self) -> "GeneratorConfig":
        if min(self.dims) < 2:
            raise ValueError(f"Grid dims must be at least 2 per axis, got {self.dims}")
        for kind in self.kinds:
            reach = self.sizes.max_bounding_fraction(kind)
            if reach >= _MARGIN_FRACTION:
                raise ValueError(
                    f"{kind.value} sizes reach {reach:.3f} of the grid extent; "
                    f"bounding spheres must stay below {_MARGIN_FRACTION}"
                )
        low, high = self.shear_range
        if not 0 < low <= high <= math.pi / 2:
            raise ValueError(f"Shear range {self.shear_range} outside (0, pi/2]")
        return self

    def meta(self) -> GridMeta:
        return GridMeta.of(self.dims, self.spacing)

    def with_seed(self, seed: int) -> "GeneratorConfig":
        return self.model_copy(update={"seed": seed})


class NetConfig(BaseModel, frozen=True):
    levels: Annotated[int, Field(ge=1)] = 2
    base_channels: Annotated[int, Field(ge=1)] = 8


class TrainSettings(BaseModel, frozen=True):
    """Training settings shared by both arms; the loss follows the head."""

    optimizer: OptimizerKind = OptimizerKind.ADAM
    learning_rate: Annotated[float, Field(ge=0, allow_inf_nan=False)] = 1e-3
    epochs: Annotated[int, Field(ge=1)] = 40
    weight_epsilon: Annotated[float, Field(gt=0, allow_inf_nan=False)] = 1.0
    weight_normalization: Literal["mean", "weight-sum"] = "mean"
    clamp_tau: Annotated[float, Field(gt=0)] | None = 20.0
    dtype: Literal["float32", "float64"] = "float32"

    def for_head(self, head: Head, seed: int) -> TrainConfig:
        return TrainConfig.for_head(
            head,
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            seed=seed,
            weight_epsilon=self.weight_epsilon,
            weight_normalization=self.weight_normalization,
            optimizer=self.optimizer,
            clamp_tau=self.clamp_tau,
            dtype=self.dtype,
        )


class EvaluationConfig(BaseModel, frozen=True):
    """Evaluation settings.

    Attributes:
        kernel_radius: Box radius of the contour band (2 gives a 5x5x5 kernel)
        samples_per_triangle: Interior barycentric samples per triangle, taken
            on top of the mesh vertices. 1 is the centroid; the default 3 uses
            (2/3, 1/6, 1/6) and its permutations instead of the centroid
        distance_mode: ``mesh`` surfaces or ``boundary-voxel`` centres
    """

    kernel_radius: tuple[Count, Count, Count] = (2, 2, 2)
    samples_per_triangle: Annotated[int, Field(ge=1)] = 3
    distance_mode: Literal["mesh", "boundary-voxel"] = "mesh"


SdfOrder = Literal["full-then-downsample", "coarse"]


class ExperimentConfig(BaseModel, frozen=True):
    """Everything one ``sdflab run`` needs.

    Examples:
        >>> config = ExperimentConfig()
        >>> config.coarse_dims, config.seeds
        ((32, 32, 32), [0, 1, 2])
        >>> config.net_spec(Head.PWR).head
        <Head.PWR: 'pwr'>
        >>> ExperimentConfig.full_scale().dataset.train_per_shape
        19
    """

    dataset: GeneratorConfig = GeneratorConfig()
    coarse_dims: Dims = (32, 32, 32)
    net: NetConfig = NetConfig()
    train: TrainSettings = TrainSettings()
    sdf_order: SdfOrder = "full-then-downsample"
    evaluation: EvaluationConfig = EvaluationConfig()
    seeds: list[Seed] = Field(default_factory=lambda: [0, 1, 2], min_length=1)
    output_dir: Path = Path("runs/default")
    workers: Annotated[int, Field(ge=1)] = 1

    @model_validator(mode="after")
    def _check_resolutions(self) -> "ExperimentConfig":
        for full, coarse in zip(self.dataset.dims, self.coarse_dims):
            if coarse > full or full % coarse:
                raise ValueError(
                    f"Coarse dims {self.coarse_dims} must divide full dims {self.dataset.dims}"
                )
        factor = 2 ** (self.net.levels - 1)
        if any(n % factor for n in self.coarse_dims):
            raise ValueError(
                f"Coarse dims {self.coarse_dims} must be divisible by {factor} "
                f"for a {self.net.levels}-level network"
            )
        return self

    @classmethod
    def full_scale(cls, **overrides) -> "ExperimentConfig":
        """512^3 grids, 64^3 network input, 19 train and 6 test per shape, 3 levels."""
        defaults = dict(
            dataset=GeneratorConfig(dims=(512, 512, 512), train_per_shape=19, test_per_shape=6),
            coarse_dims=(64, 64, 64),
            net=NetConfig(levels=3, base_channels=8),
        )
        return cls(**{**defaults, **overrides})

    def net_spec(self, head: Head) -> NetSpec:
        return NetSpec(
            levels=self.net.levels,
            base_channels=self.net.base_channels,
            input_dims=self.coarse_dims,
            head=head,
        )

    def train_config(self, head: Head, seed: int) -> TrainConfig:
        return self.train.for_head(head, seed)

    def coarse_meta(self) -> GridMeta:
        return resampled_meta(self.dataset.meta(), self.coarse_dims)

    def sdf_unit(self) -> float:
        """World length of one coarse voxel, the unit of regression targets."""
        return min(self.coarse_meta().spacing)

    def seed_dir(self, seed: int) -> Path:
        return self.output_dir / f"seed-{seed}"
