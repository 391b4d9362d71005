"""Training loop and full-resolution prediction."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from sdflab.core.exceptions import NonFiniteLossError, ShapeMismatchError
from sdflab.core.grid import BinaryVolume, ScalarVolume, threshold
from sdflab.core.net.losses import loss_cross_entropy, loss_weighted_mse
from sdflab.core.net.optim import make_optimizer
from sdflab.core.net.spec import Head, LossKind, NetSpec, TrainConfig
from sdflab.core.net.unet import Params, check_params, forward_trace, init_params, net_backward, net_forward
from sdflab.core.resample import resample_nearest, resample_trilinear

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainingCase:
    """One example at the network's input resolution."""

    case_id: str
    input: ScalarVolume
    target: BinaryVolume | ScalarVolume


@dataclass(frozen=True)
class TrainResult:
    params: Params
    loss_history: list[float]


def _check_dataset(spec: NetSpec, config: TrainConfig, dataset: Sequence[TrainingCase]) -> None:
    if not dataset:
        raise ValueError("Training needs at least one case")
    if config.loss is not spec.head.loss:
        raise ValueError(
            f"Loss {config.loss.value} does not match the {spec.head.value} head"
        )
    expected_target = BinaryVolume if spec.head is Head.PWC else ScalarVolume
    for case in dataset:
        if case.input.meta.dims != spec.input_dims:
            raise ShapeMismatchError(f"input of case '{case.case_id}'", case.input.meta.dims, spec.input_dims)
        if case.target.meta.dims != spec.input_dims:
            raise ShapeMismatchError(f"target of case '{case.case_id}'", case.target.meta.dims, spec.input_dims)
        if not isinstance(case.target, expected_target):
            raise ValueError(
                f"Case '{case.case_id}' has a {type(case.target).__name__} target; "
                f"the {spec.head.value} head needs {expected_target.__name__}"
            )


def train(spec: NetSpec, config: TrainConfig, dataset: Sequence[TrainingCase]) -> TrainResult:
    """Per-example optimizer steps over seeded shuffles of ``dataset``.

    Parameters are initialized from ``config.seed``; the shuffle uses an
    independent stream derived from the same seed, so a given seed always
    replays the same run.

    Raises:
        NonFiniteLossError: On a NaN or infinite loss, naming epoch and case
        ShapeMismatchError: If a case does not match the network input dims
    """
    _check_dataset(spec, config, dataset)
    params = init_params(spec, config.seed, config.dtype)
    optimizer = make_optimizer(config)
    shuffle = np.random.default_rng([config.seed, 1])

    inputs = [case.input.voxels[None].astype(config.dtype) for case in dataset]
    targets = []
    for case in dataset:
        target = case.target.voxels
        if config.clamp_tau is not None and spec.head is Head.PWR:
            target = np.clip(target, -config.clamp_tau, config.clamp_tau)
        targets.append(target)

    history: list[float] = []
    for epoch in range(1, config.epochs + 1):
        losses: list[float] = []
        for index in shuffle.permutation(len(dataset)):
            trace = forward_trace(spec, params, inputs[index])
            match config.loss:
                case LossKind.CROSS_ENTROPY:
                    loss, upstream = loss_cross_entropy(trace.output, targets[index])
                case LossKind.WEIGHTED_MSE:
                    loss, upstream = loss_weighted_mse(
                        trace.output,
                        targets[index],
                        config.weight_epsilon,
                        config.weight_normalization,
                    )
            if not math.isfinite(loss):
                raise NonFiniteLossError(epoch, dataset[index].case_id, loss)
            grads = net_backward(spec, params, inputs[index], upstream, trace)
            params = optimizer.step(params, grads)
            losses.append(loss)
        history.append(math.fsum(losses) / len(losses))
        logger.info("Epoch %d/%d: mean loss %.6g", epoch, config.epochs, history[-1])
    return TrainResult(params=params, loss_history=history)


@dataclass(frozen=True)
class Prediction:
    """Raw full-resolution network field plus the head that produced it.

    For pwc the field is the foreground probability; for pwr it is the
    signed distance in world units.
    """

    field: ScalarVolume
    head: Head

    def segmentation(self) -> BinaryVolume:
        """Threshold the field: probability ``> 0.5`` or distance ``< 0``."""
        match self.head:
            case Head.PWC:
                return threshold(self.field, 0.5, "above")
            case Head.PWR:
                return threshold(self.field, 0.0, "below")


def predict(
    spec: NetSpec, params: Params, volume: ScalarVolume, *, sdf_unit: float = 1.0
) -> Prediction:
    """Downsample ``volume``, run the network and bring its output back up.

    The foreground probability is nearest-upsampled; the regression output is
    scaled by ``sdf_unit`` into world units and trilinearly upsampled.
    """
    check_params(spec, params)
    coarse = resample_trilinear(volume, spec.input_dims)
    output = net_forward(spec, params, coarse.voxels[None].astype(params.dtype))
    match spec.head:
        case Head.PWC:
            low = ScalarVolume.of(coarse.meta, output[1])
            up = resample_nearest(low, volume.meta.dims)
        case Head.PWR:
            low = ScalarVolume.of(coarse.meta, output[0] * sdf_unit)
            up = resample_trilinear(low, volume.meta.dims)
    logger.debug("Predicted %s field at %s", spec.head.value, volume.meta.dims)
    return Prediction(field=ScalarVolume.of(volume.meta, up.voxels), head=spec.head)
