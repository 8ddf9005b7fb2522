"""Dense tanh networks with analytic gradients, Adam and soft target updates."""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ShapeError

OUTPUT_ACTIVATIONS = ("linear", "tanh")


@dataclass
class ForwardCache:
    """Layer inputs and pre-activations kept for the backward pass."""

    inputs: List[np.ndarray]
    pre_activations: List[np.ndarray]
    batched: bool


class Mlp:
    """Fully connected network with tanh hidden layers.

    The output head is either linear (critics) or ``center + scale * tanh(z)``
    (actors, mapping onto an action box).

    Args:
        sizes: Layer widths including input and output, e.g. ``[8, 64, 64, 2]``
        output_activation: ``"linear"`` or ``"tanh"``
        scale: Per-output half-width of the tanh head
        center: Per-output midpoint of the tanh head
        rng: Generator for the Glorot-uniform initialization
    """

    FINAL_INIT = 3e-3

    def __init__(self, sizes: Sequence[int], output_activation: str = "linear",
                 scale: Optional[np.ndarray] = None, center: Optional[np.ndarray] = None,
                 rng: Optional[np.random.Generator] = None):
        if len(sizes) < 2 or any(int(s) < 1 for s in sizes):
            raise ValueError(f"sizes must list at least two positive widths, got {list(sizes)}")
        if output_activation not in OUTPUT_ACTIVATIONS:
            raise ValueError(f"Unknown output activation {output_activation!r}")
        rng = rng if rng is not None else np.random.default_rng(0)
        self.sizes = [int(s) for s in sizes]
        self.output_activation = output_activation
        out = self.sizes[-1]
        self.scale = np.ones(out) if scale is None else np.broadcast_to(np.asarray(scale, float), (out,)).copy()
        self.center = np.zeros(out) if center is None else np.broadcast_to(np.asarray(center, float), (out,)).copy()

        self.weights: List[np.ndarray] = []
        self.biases: List[np.ndarray] = []
        last = len(self.sizes) - 2
        for i, (fan_in, fan_out) in enumerate(zip(self.sizes, self.sizes[1:])):
            bound = self.FINAL_INIT if i == last else np.sqrt(6.0 / (fan_in + fan_out))
            self.weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out) if i < last else rng.uniform(-bound, bound, size=fan_out))

    @property
    def input_dim(self) -> int:
        return self.sizes[0]

    @property
    def output_dim(self) -> int:
        return self.sizes[-1]

    @property
    def params(self) -> List[np.ndarray]:
        """Parameters in the order ``W0, b0, W1, b1, ...`` (views, not copies)."""
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    def copy(self) -> 'Mlp':
        clone = Mlp.__new__(Mlp)
        clone.sizes = list(self.sizes)
        clone.output_activation = self.output_activation
        clone.scale = self.scale.copy()
        clone.center = self.center.copy()
        clone.weights = [w.copy() for w in self.weights]
        clone.biases = [b.copy() for b in self.biases]
        return clone

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.params)

    def forward_cache(self, x: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
        x = np.asarray(x, dtype=float)
        batched = x.ndim == 2
        h = x if batched else x.reshape(1, -1)
        if h.ndim != 2 or h.shape[1] != self.input_dim:
            raise ShapeError(f"Expected input width {self.input_dim}, got shape {x.shape}")
        inputs, pre = [], []
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            inputs.append(h)
            z = h @ w + b
            pre.append(z)
            if i < last:
                h = np.tanh(z)
            elif self.output_activation == "tanh":
                h = self.center + self.scale * np.tanh(z)
            else:
                h = z
        return (h if batched else h[0]), ForwardCache(inputs, pre, batched)

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.forward_cache(x)[0]

    __call__ = forward


def mlp_backward(net: Mlp, x: np.ndarray, upstream: np.ndarray,
                 cache: Optional[ForwardCache] = None) -> Tuple[List[np.ndarray], np.ndarray]:
    """Gradients of ``sum(upstream * net(x))`` with respect to every parameter and the input.

    Args:
        net: The network
        x: Input, ``(batch, in)`` or ``(in,)``
        upstream: ``dLoss/dOutput`` with the shape of ``net(x)``
        cache: Forward cache for ``x``, recomputed when omitted

    Returns:
        ``(grads, dx)`` with ``grads`` ordered like ``net.params``

    Raises:
        ShapeError: If ``x`` or ``upstream`` does not fit the network
    """
    if cache is None:
        _, cache = net.forward_cache(x)
    g = np.asarray(upstream, dtype=float)
    if not cache.batched:
        g = g.reshape(1, -1)
    batch = cache.inputs[0].shape[0]
    if g.shape != (batch, net.output_dim):
        raise ShapeError(f"Upstream gradient shape {np.shape(upstream)} does not match output "
                         f"({batch}, {net.output_dim})")

    last = len(net.weights) - 1
    if net.output_activation == "tanh":
        g = g * net.scale * (1.0 - np.tanh(cache.pre_activations[last]) ** 2)

    grads: List[np.ndarray] = [np.empty(0)] * (2 * len(net.weights))
    for i in range(last, -1, -1):
        grads[2 * i] = cache.inputs[i].T @ g
        grads[2 * i + 1] = g.sum(axis=0)
        g = g @ net.weights[i].T
        if i > 0:
            g = g * (1.0 - np.tanh(cache.pre_activations[i - 1]) ** 2)
    dx = g if cache.batched else g[0]
    return grads, dx


class Adam:
    """Adam optimizer updating a fixed list of parameter arrays in place."""

    def __init__(self, params: List[np.ndarray], lr: float = 1e-3, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, grads: List[np.ndarray]) -> None:
        if len(grads) != len(self.params):
            raise ShapeError(f"Expected {len(self.params)} gradients, got {len(grads)}")
        self.t += 1
        correction1 = 1.0 - self.beta1 ** self.t
        correction2 = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.lr * (m / correction1) / (np.sqrt(v / correction2) + self.eps)


def soft_update(target: Mlp, source: Mlp, tau: float) -> None:
    """``theta_target <- tau * theta + (1 - tau) * theta_target`` for every parameter."""
    for t, s in zip(target.params, source.params):
        t[...] = tau * s + (1.0 - tau) * t
