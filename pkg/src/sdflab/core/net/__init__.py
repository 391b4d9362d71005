"""Compact 3D U-net with explicit gradients, losses, optimizers and training."""

from .layers import (
    Tensor4,
    conv3d_backward,
    conv3d_forward,
    maxpool2_backward,
    maxpool2_forward,
    softmax_channels,
    tensor_linear,
    upsample2_backward,
    upsample2_forward,
)
from .losses import loss_cross_entropy, loss_weighted_mse, sdf_weights
from .optim import Adam, Optimizer, Sgd, make_optimizer
from .spec import ConvSpec, Head, LossKind, NetSpec, OptimizerKind, TrainConfig
from .training import Prediction, TrainingCase, TrainResult, predict, train
from .unet import (
    ForwardTrace,
    Gradients,
    Params,
    batch_gradients,
    check_params,
    forward_trace,
    init_params,
    net_backward,
    net_forward,
    parameter_shapes,
)

__all__ = [
    "Tensor4",
    "conv3d_backward",
    "conv3d_forward",
    "maxpool2_backward",
    "maxpool2_forward",
    "softmax_channels",
    "tensor_linear",
    "upsample2_backward",
    "upsample2_forward",
    "loss_cross_entropy",
    "loss_weighted_mse",
    "sdf_weights",
    "Adam",
    "Optimizer",
    "Sgd",
    "make_optimizer",
    "ConvSpec",
    "Head",
    "LossKind",
    "NetSpec",
    "OptimizerKind",
    "TrainConfig",
    "Prediction",
    "TrainingCase",
    "TrainResult",
    "predict",
    "train",
    "ForwardTrace",
    "Gradients",
    "Params",
    "batch_gradients",
    "check_params",
    "forward_trace",
    "init_params",
    "net_backward",
    "net_forward",
    "parameter_shapes",
]
