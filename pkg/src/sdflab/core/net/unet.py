"""U-net parameters with explicit forward and reverse-mode passes."""

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from sdflab.core.exceptions import ShapeMismatchError
from sdflab.core.net.layers import (
    Tensor4,
    conv3d_backward,
    conv3d_forward,
    maxpool2_backward,
    maxpool2_forward,
    relu,
    relu_backward,
    softmax_channels,
    upsample2_backward,
    upsample2_forward,
)
from sdflab.core.net.spec import Head, NetSpec

FloatDType = Literal["float32", "float64"]

Gradients = dict[str, NDArray[np.floating]]
"""Gradient per parameter tensor, keyed like ``Params.tensors``."""


@dataclass(frozen=True)
class Params:
    """Trainable state: one ``<conv>.weight`` and ``<conv>.bias`` per convolution."""

    tensors: dict[str, NDArray[np.floating]]
    seed: int

    def weight(self, conv: str) -> NDArray[np.floating]:
        return self.tensors[f"{conv}.weight"]

    def bias(self, conv: str) -> NDArray[np.floating]:
        return self.tensors[f"{conv}.bias"]

    @property
    def dtype(self) -> np.dtype:
        return next(iter(self.tensors.values())).dtype

    def count(self) -> int:
        return sum(t.size for t in self.tensors.values())

    def replace(self, tensors: dict[str, NDArray[np.floating]]) -> "Params":
        return Params(tensors={**self.tensors, **tensors}, seed=self.seed)

    def astype(self, dtype: FloatDType) -> "Params":
        return Params(
            tensors={name: t.astype(dtype) for name, t in self.tensors.items()},
            seed=self.seed,
        )


def parameter_shapes(spec: NetSpec) -> dict[str, tuple[int, ...]]:
    """Tensor name to shape, in parameter order."""
    shapes: dict[str, tuple[int, ...]] = {}
    for conv in spec.convolutions():
        shapes[f"{conv.name}.weight"] = conv.weight_shape
        shapes[f"{conv.name}.bias"] = (conv.out_channels,)
    return shapes


def init_params(
    spec: NetSpec, seed: int, dtype: FloatDType = "float32", *, zero_head: bool = False
) -> Params:
    """Fan-in scaled uniform initialization, deterministic in ``seed``.

    Weights are drawn from ``U(-b, b)`` with ``b = sqrt(6 / fan_in)``;
    biases start at zero.

    Examples:
        >>> spec = NetSpec(levels=1, base_channels=2, input_dims=(4, 4, 4), head=Head.PWC)
        >>> a, b = init_params(spec, 7), init_params(spec, 7)
        >>> all(np.array_equal(a.tensors[k], b.tensors[k]) for k in a.tensors)
        True
        >>> init_params(spec, 7).count() == spec.parameter_count()
        True
    """
    rng = np.random.default_rng(seed)
    tensors: dict[str, NDArray[np.floating]] = {}
    for conv in spec.convolutions():
        fan_in = conv.in_channels * conv.kernel**3
        bound = np.sqrt(6.0 / fan_in)
        weight = rng.uniform(-bound, bound, size=conv.weight_shape)
        if zero_head and conv.name == "head":
            weight = np.zeros(conv.weight_shape)
        tensors[f"{conv.name}.weight"] = weight.astype(dtype)
        tensors[f"{conv.name}.bias"] = np.zeros(conv.out_channels, dtype=dtype)
    return Params(tensors=tensors, seed=seed)


def check_params(spec: NetSpec, params: Params) -> None:
    """Raise ShapeMismatchError unless ``params`` matches ``parameter_shapes(spec)``."""
    expected = parameter_shapes(spec)
    if set(expected) != set(params.tensors):
        raise ShapeMismatchError(
            "parameter names", sorted(params.tensors), sorted(expected)
        )
    for name, shape in expected.items():
        if params.tensors[name].shape != shape:
            raise ShapeMismatchError(f"parameter {name}", params.tensors[name].shape, shape)


def check_input(spec: NetSpec, x: Tensor4) -> None:
    expected = (spec.in_channels, *spec.input_dims)
    if x.shape != expected:
        raise ShapeMismatchError("network input", x.shape, expected)


@dataclass(frozen=True)
class ForwardTrace:
    """Activations recorded by a forward pass.

    ``head`` is the head convolution output before the final activation:
    logits for pwc, the regression value for pwr. ``output`` is the network
    output after it.
    """

    output: Tensor4
    head: Tensor4
    convs: dict[str, tuple[Tensor4, Tensor4]] = field(default_factory=dict)
    pools: dict[int, NDArray[np.intp]] = field(default_factory=dict)


def forward_trace(spec: NetSpec, params: Params, x: Tensor4) -> ForwardTrace:
    """Run the network and keep what ``net_backward`` needs."""
    check_input(spec, x)
    x = np.asarray(x, dtype=params.dtype)
    convs: dict[str, tuple[Tensor4, Tensor4]] = {}
    pools: dict[int, NDArray[np.intp]] = {}

    def conv_relu(name: str, inp: Tensor4) -> Tensor4:
        out = relu(conv3d_forward(inp, params.weight(name), params.bias(name)))
        convs[name] = (inp, out)
        return out

    skips: list[Tensor4] = []
    h = x
    for level in range(spec.levels):
        if level > 0:
            h, pools[level] = maxpool2_forward(h)
        h = conv_relu(f"enc{level}.conv0", h)
        h = conv_relu(f"enc{level}.conv1", h)
        skips.append(h)

    for level in reversed(range(spec.levels - 1)):
        up = conv_relu(f"up{level}", upsample2_forward(h))
        h = np.concatenate([skips[level], up], axis=0)
        h = conv_relu(f"dec{level}.conv0", h)
        h = conv_relu(f"dec{level}.conv1", h)

    head = conv3d_forward(h, params.weight("head"), params.bias("head"))
    convs["head"] = (h, head)
    match spec.head:
        case Head.PWC:
            output = softmax_channels(head)
        case Head.PWR:
            output = head
    return ForwardTrace(output=output, head=head, convs=convs, pools=pools)


def net_forward(spec: NetSpec, params: Params, x: Tensor4) -> Tensor4:
    """Network output: softmax probabilities (pwc) or a linear field (pwr).

    Examples:
        >>> spec = NetSpec(levels=2, base_channels=2, input_dims=(4, 4, 4), head=Head.PWC)
        >>> params = init_params(spec, 0, zero_head=True)
        >>> out = net_forward(spec, params, np.ones((1, 4, 4, 4), dtype=np.float32))
        >>> out.shape, float(out.min()), float(out.max())
        ((2, 4, 4, 4), 0.5, 0.5)
    """
    return forward_trace(spec, params, x).output


def net_backward(
    spec: NetSpec,
    params: Params,
    x: Tensor4,
    upstream: Tensor4,
    trace: ForwardTrace | None = None,
) -> Gradients:
    """Reverse-mode parameter gradients.

    ``upstream`` is the gradient of the scalar loss with respect to the head
    output before its activation (the logits for pwc). When ``trace`` is
    omitted the forward pass is recomputed.
    """
    if trace is None:
        trace = forward_trace(spec, params, x)
    if upstream.shape != trace.head.shape:
        raise ShapeMismatchError("upstream gradient", upstream.shape, trace.head.shape)
    upstream = np.asarray(upstream, dtype=params.dtype)
    grads: Gradients = {}

    def backward(name: str, dout: Tensor4, activated: bool = True) -> Tensor4:
        inp, out = trace.convs[name]
        if activated:
            dout = relu_backward(out, dout)
        dx, dweight, dbias = conv3d_backward(inp, params.weight(name), dout)
        grads[f"{name}.weight"] = dweight
        grads[f"{name}.bias"] = dbias
        return dx

    g = backward("head", upstream, activated=False)

    skip_grads: dict[int, Tensor4] = {}
    for level in range(spec.levels - 1):
        g = backward(f"dec{level}.conv1", g)
        g = backward(f"dec{level}.conv0", g)
        channels = spec.channels(level)
        skip_grads[level] = g[:channels]
        g = upsample2_backward(backward(f"up{level}", g[channels:]))

    for level in reversed(range(spec.levels)):
        if level in skip_grads:
            g = g + skip_grads[level]
        g = backward(f"enc{level}.conv1", g)
        g = backward(f"enc{level}.conv0", g)
        if level > 0:
            g = maxpool2_backward(trace.pools[level], g)
    return grads


def batch_gradients(
    spec: NetSpec,
    params: Params,
    inputs: list[Tensor4],
    upstreams: list[Tensor4],
) -> Gradients:
    """Sum-reduced gradients over a batch of examples."""
    if len(inputs) != len(upstreams):
        raise ShapeMismatchError("batch", len(inputs), len(upstreams))
    total: Gradients = {}
    for x, upstream in zip(inputs, upstreams):
        for name, g in net_backward(spec, params, x, upstream).items():
            total[name] = total[name] + g if name in total else g.copy()
    return total
