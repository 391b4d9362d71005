"""Training losses, each returning the loss and its gradient.

Both gradients are taken with respect to the head output before its final
activation (logits for cross-entropy, the linear output for weighted MSE).
"""

from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sdflab.core.exceptions import ShapeMismatchError
from sdflab.core.grid import BinaryVolume, ScalarVolume
from sdflab.core.net.layers import Tensor4

WeightNormalization = Literal["mean", "weight-sum"]

_LOG_FLOOR = 1e-12


def _target_array(target: BinaryVolume | ScalarVolume | ArrayLike) -> NDArray:
    match target:
        case BinaryVolume() | ScalarVolume():
            return target.voxels
        case _:
            return np.asarray(target)


def loss_cross_entropy(
    probs: Tensor4, target: BinaryVolume | ArrayLike
) -> tuple[float, Tensor4]:
    """Mean voxel cross-entropy of 2-channel softmax output.

    Returns:
        ``(loss, gradient)`` with gradient ``(probs - onehot) / N``

    Examples:
        >>> probs = np.full((2, 2, 1, 1), 0.5)
        >>> loss, grad = loss_cross_entropy(probs, np.array([[[1]], [[0]]]))
        >>> round(loss, 12) == round(float(np.log(2)), 12)
        True
        >>> grad[:, :, 0, 0].tolist()
        [[0.25, -0.25], [-0.25, 0.25]]
    """
    labels = _target_array(target)
    if probs.ndim != 4 or probs.shape[0] != 2 or probs.shape[1:] != labels.shape:
        raise ShapeMismatchError("cross-entropy prediction vs target", probs.shape, labels.shape)
    foreground = labels.astype(bool)
    onehot = np.stack([~foreground, foreground]).astype(probs.dtype)
    p_true = np.where(foreground, probs[1], probs[0])
    n = labels.size
    loss = float(-np.log(np.maximum(p_true.astype(np.float64), _LOG_FLOOR)).sum() / n)
    return loss, (probs - onehot) / n


def sdf_weights(distances: NDArray, epsilon: float) -> NDArray:
    """``w = 1 / (|d| + epsilon)``.

    Examples:
        >>> sdf_weights(np.array([0.0, -1.0, 3.0]), 1.0).tolist()
        [1.0, 0.5, 0.25]
    """
    if not epsilon > 0:
        raise ValueError(f"Weight epsilon must be positive, got {epsilon}")
    return 1.0 / (np.abs(distances) + epsilon)


def loss_weighted_mse(
    pred: Tensor4,
    target: ScalarVolume | ArrayLike,
    epsilon: float = 1.0,
    normalization: WeightNormalization = "mean",
) -> tuple[float, Tensor4]:
    """Squared error weighted by inverse distance to the contour.

    ``mean`` divides the weighted sum by the voxel count, ``weight-sum`` by
    the sum of weights.

    Examples:
        >>> loss, grad = loss_weighted_mse(np.ones((1, 1, 1, 1)), np.zeros((1, 1, 1)))
        >>> loss, grad.ravel().tolist()
        (1.0, [2.0])
    """
    distances = _target_array(target)
    if pred.ndim != 4 or pred.shape[0] != 1 or pred.shape[1:] != distances.shape:
        raise ShapeMismatchError("weighted-mse prediction vs target", pred.shape, distances.shape)
    d = distances.astype(np.float64)
    w = sdf_weights(d, epsilon)
    residual = pred[0].astype(np.float64) - d
    match normalization:
        case "mean":
            scale = float(d.size)
        case "weight-sum":
            scale = float(w.sum())
        case _:
            raise ValueError(f"Unsupported weight normalization: {normalization}")
    loss = float((w * residual * residual).sum() / scale)
    grad = (2.0 * w * residual / scale)[None].astype(pred.dtype)
    return loss, grad
