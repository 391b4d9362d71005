"""Gradient-descent optimizers over ``Params``."""

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from numpy.typing import NDArray

from sdflab.core.net.spec import OptimizerKind, TrainConfig
from sdflab.core.net.unet import Gradients, Params


class Optimizer(Protocol):
    def step(self, params: Params, grads: Gradients) -> Params: ...


@dataclass
class Sgd:
    """Plain stochastic gradient descent."""

    learning_rate: float

    def step(self, params: Params, grads: Gradients) -> Params:
        if self.learning_rate == 0:
            return params
        return params.replace(
            {
                name: (t - self.learning_rate * grads[name]).astype(t.dtype)
                for name, t in params.tensors.items()
            }
        )


@dataclass
class Adam:
    """Adam with bias-corrected first and second moments."""

    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    steps: int = 0
    first: dict[str, NDArray[np.floating]] = field(default_factory=dict)
    second: dict[str, NDArray[np.floating]] = field(default_factory=dict)

    def step(self, params: Params, grads: Gradients) -> Params:
        self.steps += 1
        if self.learning_rate == 0:
            return params
        correction1 = 1.0 - self.beta1**self.steps
        correction2 = 1.0 - self.beta2**self.steps
        updated: dict[str, NDArray[np.floating]] = {}
        for name, t in params.tensors.items():
            g = grads[name]
            m = self.beta1 * self.first.get(name, np.zeros_like(t)) + (1 - self.beta1) * g
            v = self.beta2 * self.second.get(name, np.zeros_like(t)) + (1 - self.beta2) * g * g
            self.first[name] = m
            self.second[name] = v
            m_hat = m / correction1
            v_hat = v / correction2
            updated[name] = (t - self.learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon)).astype(t.dtype)
        return params.replace(updated)


def make_optimizer(config: TrainConfig) -> Optimizer:
    match config.optimizer:
        case OptimizerKind.SGD:
            return Sgd(learning_rate=config.learning_rate)
        case OptimizerKind.ADAM:
            return Adam(
                learning_rate=config.learning_rate,
                beta1=config.beta1,
                beta2=config.beta2,
                epsilon=config.adam_epsilon,
            )
