"""Sparse layered networks and their implementation as parametrised functions.

A layer of type ``(n_in, n_out)`` is a set of connections ``(j, i)``, meaning
output node ``j`` reads input node ``i`` (both 1-indexed).  Its parameter
vector holds the weights in lexicographic ``(j, i)`` order followed by the
``n_out`` biases.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .exceptions import DimensionError
from .para import ParamFn, compose_para, identity_para


@dataclass(frozen=True)
class Layer:
    n_in: int
    n_out: int
    connections: tuple[tuple[int, int], ...]

    def __init__(self, n_in: int, n_out: int, connections: Iterable[Iterable[int]]):
        pairs = [tuple(int(v) for v in c) for c in connections]
        for pair in pairs:
            if len(pair) != 2:
                raise ValueError(f"connection {pair} is not a pair")
            j, i = pair
            if not (1 <= j <= n_out and 1 <= i <= n_in):
                raise ValueError(
                    f"connection (j={j}, i={i}) out of range for a layer {n_in} -> {n_out}")
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate connections in layer")
        object.__setattr__(self, "n_in", int(n_in))
        object.__setattr__(self, "n_out", int(n_out))
        object.__setattr__(self, "connections", tuple(sorted(pairs)))

    @classmethod
    def full(cls, n_in: int, n_out: int) -> "Layer":
        return cls(n_in, n_out, [(j, i) for j in range(1, n_out + 1)
                                 for i in range(1, n_in + 1)])

    @property
    def param_dim(self) -> int:
        return len(self.connections) + self.n_out


@dataclass(frozen=True)
class Network:
    width_in: int
    layers: tuple[Layer, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        width = self.width_in
        for k, layer in enumerate(self.layers):
            if layer.n_in != width:
                raise DimensionError(
                    f"layer {k} expects {layer.n_in} inputs but receives {width}",
                    expected=layer.n_in, actual=width)
            width = layer.n_out

    @property
    def width_out(self) -> int:
        return self.layers[-1].n_out if self.layers else self.width_in

    @property
    def param_dim(self) -> int:
        return sum(layer.param_dim for layer in self.layers)


@dataclass(frozen=True)
class Activation:
    name: str
    sigma: Callable[[np.ndarray], np.ndarray]
    dsigma: Callable[[np.ndarray], np.ndarray]


def _sigmoid(x):
    # overflow-free form of 1 / (1 + exp(-x))
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(x, dtype=np.float64)))


def _dsigmoid(x):
    s = _sigmoid(x)
    return s * (1.0 - s)


ACTIVATIONS = {
    "identity": Activation("identity", lambda x: np.asarray(x, dtype=np.float64) * 1.0,
                           lambda x: np.ones_like(np.asarray(x, dtype=np.float64))),
    "sigmoid": Activation("sigmoid", _sigmoid, _dsigmoid),
    "tanh": Activation("tanh", np.tanh, lambda x: 1.0 - np.tanh(x) ** 2),
}


def builtin_activation(name: str) -> Activation:
    try:
        return ACTIVATIONS[name]
    except KeyError:
        raise ValueError(f"unknown activation {name!r}; valid names: "
                         f"{', '.join(ACTIVATIONS)}") from None


def concat_networks(N1: Network, N2: Network) -> Network:
    if N1.width_out != N2.width_in:
        raise DimensionError(
            f"cannot concatenate: first network ends with width {N1.width_out}, "
            f"second starts with {N2.width_in}",
            expected=N1.width_out, actual=N2.width_in)
    return Network(N1.width_in, N1.layers + N2.layers)


def layer_param_fn(layer: Layer, act: Activation) -> ParamFn:
    n_conn, n_out, n_in = len(layer.connections), layer.n_out, layer.n_in
    conn = np.array(layer.connections, dtype=np.intp).reshape(-1, 2) - 1
    rows, cols = conn[:, 0], conn[:, 1]

    def preactivation(p, x):
        weights, bias = p[:n_conn], p[n_conn:]
        return bias + np.bincount(rows, weights=weights * x[cols], minlength=n_out)

    def forward(p, x):
        return act.sigma(preactivation(p, x))

    def vjp(p, x):
        z = preactivation(p, x)

        def back(w):
            delta = w * act.dsigma(z)
            g_weights = delta[rows] * x[cols]
            g_x = np.bincount(cols, weights=delta[rows] * p[:n_conn], minlength=n_in)
            return np.concatenate([g_weights, delta]), g_x

        return act.sigma(z), back

    def pullback(p, x, w):
        return vjp(p, x)[1](w)

    return ParamFn(n_conn + n_out, n_in, n_out, forward, pullback,
                   f"layer{n_in}->{n_out}[{act.name}]", vjp)


def implement_network(N: Network, act: Activation) -> ParamFn:
    if not N.layers:
        return identity_para(N.width_in)
    F = layer_param_fn(N.layers[0], act)
    for layer in N.layers[1:]:
        F = compose_para(F, layer_param_fn(layer, act))
    return F


def network_to_json(N: Network, activation: str) -> dict:
    return {"width_in": N.width_in,
            "layers": [{"n_out": layer.n_out,
                        "connections": [list(c) for c in layer.connections]}
                       for layer in N.layers],
            "activation": activation}


def network_from_json(data: dict) -> tuple[Network, Activation]:
    """Parse the network schema; ``"connections": "full"`` means every pair."""
    width = int(data["width_in"])
    layers = []
    for entry in data.get("layers", []):
        n_out = int(entry["n_out"])
        conns = entry.get("connections", "full")
        layers.append(Layer.full(width, n_out) if conns == "full"
                      else Layer(width, n_out, conns))
        width = n_out
    return Network(int(data["width_in"]), layers), builtin_activation(
        data.get("activation", "sigmoid"))


def load_network(path) -> tuple[Network, Activation]:
    return network_from_json(json.loads(Path(path).read_text()))
