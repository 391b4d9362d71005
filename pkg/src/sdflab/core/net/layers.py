"""Layer primitives with explicit forward and backward passes.

Activations are ``Tensor4`` arrays shaped ``(channels, nx, ny, nz)``.
"""

from itertools import product

import numpy as np
from numpy.typing import NDArray

from sdflab.core.exceptions import ShapeMismatchError

Tensor4 = NDArray[np.floating]
"""Activation tensor ``(channels, nx, ny, nz)``; linear order is channel-major, x fastest."""


def tensor_linear(x: Tensor4) -> NDArray[np.floating]:
    """Flatten channel-major with x fastest inside each channel.

    Examples:
        >>> x = np.arange(8.0).reshape(2, 2, 2, 1)
        >>> tensor_linear(x).tolist()
        [0.0, 2.0, 1.0, 3.0, 4.0, 6.0, 5.0, 7.0]
    """
    return np.concatenate([channel.ravel(order="F") for channel in x])


def _check_conv(x: Tensor4, weight: NDArray, bias: NDArray) -> int:
    if x.ndim != 4:
        raise ShapeMismatchError("conv3d input must be (C, X, Y, Z)", x.shape, "4 axes")
    if weight.ndim != 5 or weight.shape[1] != x.shape[0]:
        raise ShapeMismatchError("conv3d weight vs input", weight.shape, x.shape)
    k = weight.shape[2]
    if weight.shape[2:] != (k, k, k) or k % 2 == 0:
        raise ShapeMismatchError("conv3d kernel must be odd and cubic", weight.shape, (k, k, k))
    if bias.shape != (weight.shape[0],):
        raise ShapeMismatchError("conv3d bias vs weight", bias.shape, weight.shape)
    return k // 2


def _pad(x: Tensor4, pad: int) -> Tensor4:
    if pad == 0:
        return x
    return np.pad(x, ((0, 0), (pad, pad), (pad, pad), (pad, pad)))


def conv3d_forward(x: Tensor4, weight: NDArray, bias: NDArray) -> Tensor4:
    """Cross-correlation with zero padding that preserves spatial dims.

    Examples:
        >>> x = np.arange(8.0).reshape(1, 2, 2, 2)
        >>> identity = np.ones((1, 1, 1, 1, 1))
        >>> bool((conv3d_forward(x, identity, np.zeros(1)) == x).all())
        True
    """
    pad = _check_conv(x, weight, bias)
    k = weight.shape[2]
    _, nx, ny, nz = x.shape
    xp = _pad(x, pad)
    out = np.empty((weight.shape[0], nx, ny, nz), dtype=np.result_type(x, weight))
    out[...] = bias[:, None, None, None]
    for a, b, c in product(range(k), repeat=3):
        window = xp[:, a : a + nx, b : b + ny, c : c + nz]
        out += np.tensordot(weight[:, :, a, b, c], window, axes=(1, 0))
    return out


def conv3d_backward(
    x: Tensor4, weight: NDArray, dout: Tensor4
) -> tuple[Tensor4, NDArray, NDArray]:
    """Gradients of a convolution with respect to input, weight and bias."""
    pad = _check_conv(x, weight, np.zeros(weight.shape[0]))
    if dout.shape != (weight.shape[0], *x.shape[1:]):
        raise ShapeMismatchError("conv3d upstream gradient", dout.shape, (weight.shape[0], *x.shape[1:]))
    k = weight.shape[2]
    _, nx, ny, nz = x.shape
    xp = _pad(x, pad)
    dxp = np.zeros_like(xp, dtype=np.result_type(x, weight, dout))
    dweight = np.empty_like(weight)
    for a, b, c in product(range(k), repeat=3):
        window = xp[:, a : a + nx, b : b + ny, c : c + nz]
        dweight[:, :, a, b, c] = np.tensordot(dout, window, axes=([1, 2, 3], [1, 2, 3]))
        dxp[:, a : a + nx, b : b + ny, c : c + nz] += np.tensordot(
            weight[:, :, a, b, c], dout, axes=(0, 0)
        )
    dbias = dout.sum(axis=(1, 2, 3))
    dx = dxp[:, pad : pad + nx, pad : pad + ny, pad : pad + nz]
    return dx, dweight, dbias


def relu(x: Tensor4) -> Tensor4:
    return np.maximum(x, 0)


def relu_backward(out: Tensor4, dout: Tensor4) -> Tensor4:
    """Backward through ReLU given its output."""
    return dout * (out > 0)


def maxpool2_forward(x: Tensor4) -> tuple[Tensor4, NDArray[np.intp]]:
    """2x2x2 max pooling; returns the pooled tensor and winning offsets.

    Ties go to the first maximum in (x, y, z) raster order of the block.
    """
    c, nx, ny, nz = x.shape
    if nx % 2 or ny % 2 or nz % 2:
        raise ShapeMismatchError("maxpool2 needs even dims", x.shape[1:], "even")
    blocks = (
        x.reshape(c, nx // 2, 2, ny // 2, 2, nz // 2, 2)
        .transpose(0, 1, 3, 5, 2, 4, 6)
        .reshape(c, nx // 2, ny // 2, nz // 2, 8)
    )
    winners = blocks.argmax(axis=-1)
    pooled = np.take_along_axis(blocks, winners[..., None], axis=-1)[..., 0]
    return pooled, winners


def maxpool2_backward(winners: NDArray[np.intp], dout: Tensor4) -> Tensor4:
    c, mx, my, mz = dout.shape
    blocks = np.zeros((c, mx, my, mz, 8), dtype=dout.dtype)
    np.put_along_axis(blocks, winners[..., None], dout[..., None], axis=-1)
    return (
        blocks.reshape(c, mx, my, mz, 2, 2, 2)
        .transpose(0, 1, 4, 2, 5, 3, 6)
        .reshape(c, 2 * mx, 2 * my, 2 * mz)
    )


def upsample2_forward(x: Tensor4) -> Tensor4:
    """Nearest-neighbour 2x upsampling on every spatial axis."""
    return x.repeat(2, axis=1).repeat(2, axis=2).repeat(2, axis=3)


def upsample2_backward(dout: Tensor4) -> Tensor4:
    c, nx, ny, nz = dout.shape
    return dout.reshape(c, nx // 2, 2, ny // 2, 2, nz // 2, 2).sum(axis=(2, 4, 6))


def softmax_channels(logits: Tensor4) -> Tensor4:
    """Softmax over the channel axis.

    Examples:
        >>> probs = softmax_channels(np.zeros((2, 1, 1, 1)))
        >>> probs[:, 0, 0, 0].tolist()
        [0.5, 0.5]
    """
    shifted = logits - logits.max(axis=0, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=0, keepdims=True)
