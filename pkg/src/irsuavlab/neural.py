"""Dense feed-forward networks with analytic backprop and Adam, on plain numpy.

Shapes: weights are ``(output_width, input_width)``, biases ``(output_width,)``.
`forward` accepts one input vector or a batch ``(B, input_width)`` and returns the
same rank. Everything is float64.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from irsuavlab.exceptions import NetworkShapeError, NonFiniteError

Activation = Literal["relu", "tanh", "identity"]
ACTIVATIONS: tuple[str, ...] = ("relu", "tanh", "identity")

Array = NDArray[np.float64]


# ----------------------------- Domain types -----------------------------
@dataclass(frozen=True)
class LayerSpec:
    input_width: int
    output_width: int
    activation: Activation = "relu"

    def __post_init__(self) -> None:
        if self.input_width < 1 or self.output_width < 1:
            raise NetworkShapeError(f"layer widths must be >= 1, got {self.input_width}x{self.output_width}")
        if self.activation not in ACTIVATIONS:
            raise NetworkShapeError(f"unknown activation: {self.activation!r}")


@dataclass(frozen=True)
class AdamConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise ValueError("Adam betas must lie in (0, 1)")


@dataclass
class NetworkParams:
    """Weights, biases and the Adam state that travels with them."""

    specs: tuple[LayerSpec, ...]
    weights: list[Array]
    biases: list[Array]
    m_weights: list[Array] = field(default_factory=list)
    v_weights: list[Array] = field(default_factory=list)
    m_biases: list[Array] = field(default_factory=list)
    v_biases: list[Array] = field(default_factory=list)
    step: int = 0
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.specs) or len(self.biases) != len(self.specs):
            raise NetworkShapeError("one weight matrix and one bias vector per layer expected")
        for i, (spec, w, b) in enumerate(zip(self.specs, self.weights, self.biases)):
            if w.shape != (spec.output_width, spec.input_width):
                raise NetworkShapeError(f"layer {i}: weight shape {w.shape} does not match {spec}")
            if b.shape != (spec.output_width,):
                raise NetworkShapeError(f"layer {i}: bias shape {b.shape} does not match {spec}")
        if not self.m_weights:
            self.m_weights = [np.zeros_like(w) for w in self.weights]
            self.v_weights = [np.zeros_like(w) for w in self.weights]
            self.m_biases = [np.zeros_like(b) for b in self.biases]
            self.v_biases = [np.zeros_like(b) for b in self.biases]

    @property
    def input_width(self) -> int:
        return self.specs[0].input_width

    @property
    def output_width(self) -> int:
        return self.specs[-1].output_width

    def copy(self) -> "NetworkParams":
        return NetworkParams(
            specs=self.specs,
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            m_weights=[m.copy() for m in self.m_weights],
            v_weights=[v.copy() for v in self.v_weights],
            m_biases=[m.copy() for m in self.m_biases],
            v_biases=[v.copy() for v in self.v_biases],
            step=self.step,
            seed=self.seed,
        )


@dataclass(frozen=True)
class ForwardCache:
    """Per-layer inputs and pre-activations recorded by `forward`."""

    inputs: tuple[Array, ...]
    pre_activations: tuple[Array, ...]
    batched: bool


@dataclass(frozen=True)
class Gradients:
    weights: list[Array]
    biases: list[Array]
    input: Array


# ----------------------------- Activations -----------------------------
def _activate(z: Array, kind: str) -> Array:
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "tanh":
        return np.tanh(z)
    return z


def _activate_grad(z: Array, kind: str) -> Array:
    if kind == "relu":
        return np.where(z > 0.0, 1.0, 0.0)
    if kind == "tanh":
        t = np.tanh(z)
        return 1.0 - t * t
    return np.ones_like(z)


# ------------------------------ Building ------------------------------
def dense_stack(
    input_width: int,
    hidden: Sequence[int],
    output_width: int,
    *,
    output_activation: Activation = "identity",
    hidden_activation: Activation = "relu",
) -> tuple[LayerSpec, ...]:
    widths = [input_width, *hidden, output_width]
    specs = [
        LayerSpec(widths[i], widths[i + 1], hidden_activation) for i in range(len(widths) - 2)
    ]
    specs.append(LayerSpec(widths[-2], widths[-1], output_activation))
    return tuple(specs)


def init(specs: Sequence[LayerSpec], seed: Union[int, np.random.Generator]) -> NetworkParams:
    """Glorot-uniform weights in ±sqrt(6 / (fan_in + fan_out)), zero biases."""
    specs = tuple(specs)
    if not specs:
        raise NetworkShapeError("a network needs at least one layer")
    for prev, nxt in zip(specs, specs[1:]):
        if prev.output_width != nxt.input_width:
            raise NetworkShapeError(
                f"widths do not chain: {prev.output_width} -> {nxt.input_width}"
            )
    if isinstance(seed, np.random.Generator):
        rng, recorded = seed, None
    else:
        rng, recorded = np.random.default_rng(seed), int(seed)
    weights, biases = [], []
    for spec in specs:
        bound = np.sqrt(6.0 / (spec.input_width + spec.output_width))
        weights.append(rng.uniform(-bound, bound, size=(spec.output_width, spec.input_width)))
        biases.append(np.zeros(spec.output_width, dtype=np.float64))
    return NetworkParams(specs=specs, weights=weights, biases=biases, seed=recorded)


# ------------------------------ Passes ------------------------------
def forward(params: NetworkParams, x: ArrayLike) -> tuple[Array, ForwardCache]:
    arr = np.asarray(x, dtype=np.float64)
    batched = arr.ndim == 2
    a = arr if batched else arr.reshape(1, -1)
    if a.ndim != 2 or a.shape[1] != params.input_width:
        raise NetworkShapeError(f"input width {a.shape[-1]} does not match {params.input_width}")
    inputs, pres = [], []
    for spec, w, b in zip(params.specs, params.weights, params.biases):
        inputs.append(a)
        z = a @ w.T + b
        pres.append(z)
        a = _activate(z, spec.activation)
    out = a if batched else a[0]
    return out, ForwardCache(tuple(inputs), tuple(pres), batched)


def predict(params: NetworkParams, x: ArrayLike) -> Array:
    return forward(params, x)[0]


def backward(params: NetworkParams, cache: ForwardCache, output_gradient: ArrayLike) -> Gradients:
    """Reverse-mode gradients of sum(output * output_gradient).

    Batched caches sum parameter gradients over the batch; the input gradient keeps
    one row per sample.
    """
    g = np.asarray(output_gradient, dtype=np.float64)
    if not cache.batched:
        g = g.reshape(1, -1)
    expected = cache.pre_activations[-1].shape
    if g.shape != expected:
        raise NetworkShapeError(f"output gradient shape {g.shape} does not match {expected}")
    n_layers = len(params.specs)
    d_w: list[Array] = [np.empty(0)] * n_layers
    d_b: list[Array] = [np.empty(0)] * n_layers
    for i in reversed(range(n_layers)):
        dz = g * _activate_grad(cache.pre_activations[i], params.specs[i].activation)
        d_w[i] = dz.T @ cache.inputs[i]
        d_b[i] = dz.sum(axis=0)
        g = dz @ params.weights[i]
    return Gradients(weights=d_w, biases=d_b, input=g if cache.batched else g[0])


# ------------------------------ Updates ------------------------------
def adam_step(
    params: NetworkParams, grads: Gradients, cfg: AdamConfig, *, ascend: bool = False
) -> NetworkParams:
    """One bias-corrected Adam step, in place. ``ascend`` climbs instead of descending."""
    if len(grads.weights) != len(params.weights):
        raise NetworkShapeError("gradient layer count does not match the network")
    for gw, gb, w, b in zip(grads.weights, grads.biases, params.weights, params.biases):
        if gw.shape != w.shape or gb.shape != b.shape:
            raise NetworkShapeError("gradient shapes do not match parameter shapes")
        if not (np.all(np.isfinite(gw)) and np.all(np.isfinite(gb))):
            raise NonFiniteError("non-finite gradient")

    params.step += 1
    t = params.step
    sign = 1.0 if ascend else -1.0
    c1 = 1.0 - cfg.beta1**t
    c2 = 1.0 - cfg.beta2**t
    moments = (
        (params.weights, params.m_weights, params.v_weights, grads.weights),
        (params.biases, params.m_biases, params.v_biases, grads.biases),
    )
    for values, ms, vs, gs in moments:
        for p, m, v, g in zip(values, ms, vs, gs):
            m *= cfg.beta1
            m += (1.0 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1.0 - cfg.beta2) * g * g
            p += sign * cfg.learning_rate * (m / c1) / (np.sqrt(v / c2) + cfg.eps)
    return params


def soft_update(target: NetworkParams, source: NetworkParams, tau: float) -> NetworkParams:
    """target <- tau * source + (1 - tau) * target, in place. tau=1 is a hard copy."""
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must lie in (0, 1], got {tau}")
    if target.specs != source.specs:
        raise NetworkShapeError("soft_update needs identically shaped networks")
    pairs = list(zip(target.weights, source.weights)) + list(zip(target.biases, source.biases))
    for t, s in pairs:
        if tau == 1.0:
            t[...] = s
        else:
            t *= 1.0 - tau
            t += tau * s
    return target
