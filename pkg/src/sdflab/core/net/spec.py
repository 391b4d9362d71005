"""Network architecture and training configuration."""

from enum import Enum
from typing import Annotated, Literal

from pydantic import BaseModel, Field, model_validator

from sdflab.core.grid.meta import Dims

Seed = Annotated[int, Field(ge=0, lt=2**64)]


class Head(Enum):
    """Output head of the U-net.

    Examples:
        >>> Head.PWC.output_channels, Head.PWR.output_channels
        (2, 1)
    """

    PWC = "pwc"
    PWR = "pwr"

    @property
    def output_channels(self) -> int:
        return 2 if self is Head.PWC else 1

    @property
    def loss(self) -> "LossKind":
        return LossKind.CROSS_ENTROPY if self is Head.PWC else LossKind.WEIGHTED_MSE


class LossKind(Enum):
    CROSS_ENTROPY = "cross-entropy"
    WEIGHTED_MSE = "weighted-mse"


class OptimizerKind(Enum):
    SGD = "sgd"
    ADAM = "adam"


class ConvSpec(BaseModel, frozen=True):
    """One convolution: ``out_channels x in_channels x k x k x k`` plus bias."""

    name: str
    in_channels: int
    out_channels: int
    kernel: int
    relu: bool = True

    @property
    def weight_shape(self) -> tuple[int, int, int, int, int]:
        k = self.kernel
        return (self.out_channels, self.in_channels, k, k, k)

    @property
    def parameter_count(self) -> int:
        return self.out_channels * self.in_channels * self.kernel**3 + self.out_channels


class NetSpec(BaseModel, frozen=True):
    """Compact 3D U-net description.

    Level ``l`` runs two 3x3x3 convolutions with ``base_channels * 2**l``
    channels. Levels are joined by 2x max pooling on the way down and by
    nearest upsampling plus a 3x3x3 convolution on the way up. Encoder
    activations are concatenated into the decoder at matching resolution.
    A final 1x1x1 convolution produces 2 (pwc) or 1 (pwr) channels.

    Examples:
        >>> spec = NetSpec(levels=2, base_channels=2, input_dims=(8, 8, 8), head=Head.PWR)
        >>> [c.name for c in spec.convolutions()]
        ['enc0.conv0', 'enc0.conv1', 'enc1.conv0', 'enc1.conv1', 'up0', 'dec0.conv0', 'dec0.conv1', 'head']
        >>> from pydantic import ValidationError
        >>> import pytest
        >>> with pytest.raises(ValidationError):
        ...     NetSpec(levels=3, base_channels=2, input_dims=(6, 8, 8), head=Head.PWC)
    """

    levels: Annotated[int, Field(ge=1)] = 2
    base_channels: Annotated[int, Field(ge=1)] = 8
    input_dims: Dims = (32, 32, 32)
    head: Head = Head.PWC
    in_channels: Annotated[int, Field(ge=1)] = 1

    @model_validator(mode="after")
    def _check_divisible(self) -> "NetSpec":
        factor = 2 ** (self.levels - 1)
        if any(n % factor for n in self.input_dims):
            raise ValueError(
                f"Input dims {self.input_dims} must be divisible by {factor} "
                f"for a {self.levels}-level network"
            )
        return self

    def channels(self, level: int) -> int:
        return self.base_channels * 2**level

    def convolutions(self) -> list[ConvSpec]:
        """Every convolution in parameter order."""
        convs: list[ConvSpec] = []
        for level in range(self.levels):
            c_in = self.in_channels if level == 0 else self.channels(level - 1)
            c = self.channels(level)
            convs.append(ConvSpec(name=f"enc{level}.conv0", in_channels=c_in, out_channels=c, kernel=3))
            convs.append(ConvSpec(name=f"enc{level}.conv1", in_channels=c, out_channels=c, kernel=3))
        for level in reversed(range(self.levels - 1)):
            c = self.channels(level)
            convs.append(ConvSpec(name=f"up{level}", in_channels=self.channels(level + 1), out_channels=c, kernel=3))
            convs.append(ConvSpec(name=f"dec{level}.conv0", in_channels=2 * c, out_channels=c, kernel=3))
            convs.append(ConvSpec(name=f"dec{level}.conv1", in_channels=c, out_channels=c, kernel=3))
        convs.append(
            ConvSpec(
                name="head",
                in_channels=self.channels(0),
                out_channels=self.head.output_channels,
                kernel=1,
                relu=False,
            )
        )
        return convs

    def conv(self, name: str) -> ConvSpec:
        for conv in self.convolutions():
            if conv.name == name:
                return conv
        raise KeyError(name)

    def parameter_count(self) -> int:
        return sum(c.parameter_count for c in self.convolutions())

    def with_head(self, head: Head) -> "NetSpec":
        return self.model_copy(update={"head": head})


class TrainConfig(BaseModel, frozen=True):
    """Optimization settings for one training run.

    Attributes:
        learning_rate: Step size (0 leaves parameters unchanged)
        epochs: Passes over the training set
        seed: Seeds initialization and the per-epoch shuffle
        loss: Must match the network head
        weight_epsilon: epsilon in ``w = 1 / (|d| + epsilon)``, in target units
        weight_normalization: ``mean`` divides by N, ``weight-sum`` by sum(w)
        optimizer: ``adam`` or ``sgd``
        clamp_tau: Optional clamp applied to regression targets
        dtype: Floating point precision of parameters and activations
    """

    learning_rate: Annotated[float, Field(ge=0, allow_inf_nan=False)] = 1e-3
    epochs: Annotated[int, Field(ge=1)] = 40
    seed: Seed = 0
    loss: LossKind = LossKind.CROSS_ENTROPY
    weight_epsilon: Annotated[float, Field(gt=0, allow_inf_nan=False)] = 1.0
    weight_normalization: Literal["mean", "weight-sum"] = "mean"
    optimizer: OptimizerKind = OptimizerKind.ADAM
    beta1: Annotated[float, Field(ge=0, lt=1)] = 0.9
    beta2: Annotated[float, Field(ge=0, lt=1)] = 0.999
    adam_epsilon: Annotated[float, Field(gt=0)] = 1e-8
    clamp_tau: Annotated[float, Field(gt=0)] | None = None
    dtype: Literal["float32", "float64"] = "float32"

    @classmethod
    def for_head(cls, head: Head, **kwargs) -> "TrainConfig":
        """Config whose loss matches ``head``."""
        return cls(loss=head.loss, **kwargs)
