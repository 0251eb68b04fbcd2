"""Layered feedforward neural networks.

Nodes are neurons (bias and activation live in the node payload), edges
are directed synapses carrying one weight each. The fast scale computes
the network function by layer-wise composition; the slow scale is plain
gradient descent on batch mean squared error.

Edge ids follow a fixed layout: all synapses into layer 1 first, then
layer 2, and so on; within a layer, grouped by destination neuron, then
by source. The flat weight-vector order used by weight_vector /
set_weight_vector (and by the PSO cross-composition) is all edge weights
in edge-id order followed by the biases of all non-input nodes in
node-id order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import ComputingNetwork, EdgeState, NodeState
from .errors import ConfigurationError, NumericDivergenceError
from .problems import Dataset
from .rng import RngStream


def _logistic(x):
    # 0.5*(1+tanh(x/2)) is the overflow-safe form of 1/(1+exp(-x))
    return 0.5 * (1.0 + np.tanh(0.5 * x))


# name -> (function, derivative expressed in terms of the output)
ACTIVATIONS: dict[str, tuple[Callable, Callable]] = {
    "tanh": (np.tanh, lambda y: 1.0 - y * y),
    "logistic": (_logistic, lambda y: y * (1.0 - y)),
    "identity": (lambda x: x, lambda y: np.ones_like(y)),
}


def activate(kind: str, value):
    if kind not in ACTIVATIONS:
        known = ", ".join(sorted(ACTIVATIONS))
        raise ConfigurationError(f"unknown activation {kind!r} (known: {known})")
    return ACTIVATIONS[kind][0](value)


def weighted_sum(
    inputs: Sequence[float], weights: Sequence[float], bias: float
) -> float:
    """Bias plus the dot product of paired inputs and weights."""
    if len(inputs) != len(weights):
        raise ConfigurationError(
            f"got {len(inputs)} inputs for {len(weights)} weights"
        )
    return float(bias + sum(w * x for w, x in zip(weights, inputs)))


@dataclass(frozen=True)
class LayeredTopology:
    """Layer sizes of a fully connected feedforward network."""

    layer_sizes: tuple[int, ...]

    def __post_init__(self):
        if len(self.layer_sizes) < 2:
            raise ConfigurationError(
                f"need at least input and output layers, got {self.layer_sizes}"
            )
        if any(size < 1 for size in self.layer_sizes):
            raise ConfigurationError(
                f"every layer needs >= 1 neuron, got {self.layer_sizes}"
            )

    @property
    def depth(self) -> int:
        return len(self.layer_sizes)

    def node_base(self, layer: int) -> int:
        return sum(self.layer_sizes[:layer])

    def edge_base(self, layer: int) -> int:
        """First edge id of the synapse block into layer+1."""
        return sum(
            self.layer_sizes[k] * self.layer_sizes[k + 1] for k in range(layer)
        )

    @property
    def node_count(self) -> int:
        return sum(self.layer_sizes)

    @property
    def edge_count(self) -> int:
        return self.edge_base(self.depth - 1)

    @property
    def bias_count(self) -> int:
        return self.node_count - self.layer_sizes[0]

    @property
    def parameter_count(self) -> int:
        return self.edge_count + self.bias_count


@dataclass
class NeuronPayload:
    """Adjustable and transient state of one neuron.

    pre_activation and output hold the values from the most recent
    evaluation; input-layer neurons use the identity activation and a
    frozen zero bias.
    """

    activation: str
    bias: float
    pre_activation: float = 0.0
    output: float = 0.0


@dataclass
class SynapsePayload:
    """One directed connection weight."""

    weight: float


def _weights(net: ComputingNetwork, topo: LayeredTopology) -> list[np.ndarray]:
    """Per-layer weight matrices, shape (destination size, source size)."""
    out = []
    for k in range(topo.depth - 1):
        src, dst = topo.layer_sizes[k], topo.layer_sizes[k + 1]
        base = topo.edge_base(k)
        block = [net.edges[base + j].payload.weight for j in range(src * dst)]
        out.append(np.array(block, dtype=float).reshape(dst, src))
    return out


def _biases(net: ComputingNetwork, topo: LayeredTopology) -> list[np.ndarray]:
    out = []
    for k in range(1, topo.depth):
        base = topo.node_base(k)
        out.append(
            np.array(
                [net.nodes[base + j].payload.bias for j in range(topo.layer_sizes[k])],
                dtype=float,
            )
        )
    return out


def _store_weights(
    net: ComputingNetwork,
    topo: LayeredTopology,
    weights: list[np.ndarray],
    biases: list[np.ndarray],
) -> None:
    for k in range(topo.depth - 1):
        base = topo.edge_base(k)
        flat = weights[k].reshape(-1)
        for j, value in enumerate(flat):
            net.edges[base + j].payload.weight = float(value)
    for k in range(1, topo.depth):
        base = topo.node_base(k)
        for j in range(topo.layer_sizes[k]):
            net.nodes[base + j].payload.bias = float(biases[k - 1][j])


def _layer_activations(net: ComputingNetwork, topo: LayeredTopology) -> list[str]:
    return [
        net.nodes[topo.node_base(k)].payload.activation for k in range(topo.depth)
    ]


def forward(net: ComputingNetwork, inputs: Sequence[float]) -> list[float]:
    """Evaluate one input vector, storing every neuron's state as it goes."""
    topo = net.arch.topology
    if len(inputs) != topo.layer_sizes[0]:
        raise ConfigurationError(
            f"network takes {topo.layer_sizes[0]} inputs, got {len(inputs)}"
        )
    weights = _weights(net, topo)
    biases = _biases(net, topo)
    kinds = _layer_activations(net, topo)
    a = np.array(inputs, dtype=float)
    for j, value in enumerate(a):
        node = net.nodes[j]
        node.payload.pre_activation = float(value)
        node.payload.output = float(value)
    for k in range(topo.depth - 1):
        z = weights[k] @ a + biases[k]
        a = activate(kinds[k + 1], z)
        base = topo.node_base(k + 1)
        for j in range(topo.layer_sizes[k + 1]):
            node = net.nodes[base + j]
            if not math.isfinite(a[j]):
                raise NumericDivergenceError(
                    f"node {node.id} produced non-finite output {a[j]!r}"
                )
            node.payload.pre_activation = float(z[j])
            node.payload.output = float(a[j])
    return [float(v) for v in a]


def _batch_forward(
    weights: list[np.ndarray],
    biases: list[np.ndarray],
    kinds: list[str],
    x: np.ndarray,
) -> list[np.ndarray]:
    """All-sample forward pass; returns activations per layer (rows = samples)."""
    activations = [x]
    a = x
    for k, (w, b) in enumerate(zip(weights, biases)):
        a = activate(kinds[k + 1], a @ w.T + b)
        activations.append(a)
    return activations


def batch_mse(net: ComputingNetwork, dataset: Dataset) -> float:
    """Mean squared error over every sample and output component."""
    topo = net.arch.topology
    activations = _batch_forward(
        _weights(net, topo),
        _biases(net, topo),
        _layer_activations(net, topo),
        dataset.input_matrix(),
    )
    diff = activations[-1] - dataset.target_matrix()
    return float(np.mean(diff * diff))


def gradients(
    net: ComputingNetwork, dataset: Dataset
) -> tuple[list[np.ndarray], list[np.ndarray], float]:
    """Analytic batch-MSE gradients for every weight and bias.

    Returns (weight gradients, bias gradients, pre-update mse); shapes
    match the matrices _weights/_biases return.
    """
    topo = net.arch.topology
    if dataset.input_arity != topo.layer_sizes[0]:
        raise ConfigurationError(
            f"dataset input arity {dataset.input_arity} does not match "
            f"input layer size {topo.layer_sizes[0]}"
        )
    if dataset.target_arity != topo.layer_sizes[-1]:
        raise ConfigurationError(
            f"dataset target arity {dataset.target_arity} does not match "
            f"output layer size {topo.layer_sizes[-1]}"
        )
    weights = _weights(net, topo)
    biases = _biases(net, topo)
    kinds = _layer_activations(net, topo)
    x = dataset.input_matrix()
    t = dataset.target_matrix()
    activations = _batch_forward(weights, biases, kinds, x)
    diff = activations[-1] - t
    mse = float(np.mean(diff * diff))
    # d(mse)/d(output); mse averages over samples * components
    delta = (2.0 / diff.size) * diff * ACTIVATIONS[kinds[-1]][1](activations[-1])
    grad_w: list[np.ndarray] = [np.empty(0)] * (topo.depth - 1)
    grad_b: list[np.ndarray] = [np.empty(0)] * (topo.depth - 1)
    for k in range(topo.depth - 2, -1, -1):
        grad_w[k] = delta.T @ activations[k]
        grad_b[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ weights[k]) * ACTIVATIONS[kinds[k]][1](activations[k])
    return grad_w, grad_b, mse


def train_step(
    net: ComputingNetwork, dataset: Dataset, learning_rate: float
) -> float:
    """One full-batch gradient-descent update; returns the pre-update MSE."""
    topo = net.arch.topology
    grad_w, grad_b, mse = gradients(net, dataset)
    for g in grad_w + grad_b:
        if not np.all(np.isfinite(g)):
            raise NumericDivergenceError("gradient became non-finite")
    weights = _weights(net, topo)
    biases = _biases(net, topo)
    new_w = [w - learning_rate * g for w, g in zip(weights, grad_w)]
    new_b = [b - learning_rate * g for b, g in zip(biases, grad_b)]
    _store_weights(net, topo, new_w, new_b)
    return mse


def weight_vector(net: ComputingNetwork) -> np.ndarray:
    """Flatten all trainable parameters (edge weights, then biases)."""
    topo = net.arch.topology
    parts = [w.reshape(-1) for w in _weights(net, topo)]
    parts.extend(_biases(net, topo))
    return np.concatenate(parts)


def set_weight_vector(net: ComputingNetwork, vector: Sequence[float]) -> None:
    """Write a flat parameter vector back into the payloads."""
    topo = net.arch.topology
    vector = np.asarray(vector, dtype=float)
    if vector.shape != (topo.parameter_count,):
        raise ConfigurationError(
            f"expected {topo.parameter_count} parameters, got {vector.shape}"
        )
    cursor = 0
    weights = []
    for k in range(topo.depth - 1):
        size = topo.layer_sizes[k] * topo.layer_sizes[k + 1]
        weights.append(
            vector[cursor : cursor + size].reshape(
                topo.layer_sizes[k + 1], topo.layer_sizes[k]
            )
        )
        cursor += size
    biases = []
    for k in range(1, topo.depth):
        size = topo.layer_sizes[k]
        biases.append(vector[cursor : cursor + size])
        cursor += size
    _store_weights(net, topo, weights, biases)


class AnnArchitecture:
    """Feedforward behaviour: fast = evaluate a sample, slow = batch descent."""

    kind = "ann"
    allow_hyperedges = False

    def __init__(
        self,
        topology: LayeredTopology,
        problem: Dataset,
        learning_rate: float,
    ):
        if learning_rate <= 0:
            raise ConfigurationError(
                f"learning_rate must be positive, got {learning_rate}"
            )
        self.topology = topology
        self.problem = problem
        self.learning_rate = learning_rate
        self.input_arity = topology.layer_sizes[0]
        self._cursor = 0
        self._last_mse: float | None = None

    def check_problem(self, problem) -> None:
        if problem != self.problem:
            raise ConfigurationError("network was built for a different dataset")

    def next_input(self, net, slow_index, fast_index) -> list[float]:
        sample = self.problem.inputs[self._cursor % len(self.problem)]
        self._cursor += 1
        return list(sample)

    def fast(self, net, inputs, rng: RngStream) -> None:
        forward(net, inputs)

    def readout(self, net) -> list[float]:
        base = self.topology.node_base(self.topology.depth - 1)
        return [
            float(net.nodes[base + j].payload.output)
            for j in range(self.topology.layer_sizes[-1])
        ]

    def collect(self, net, outputs):
        return outputs

    def slow(self, net, feedback, rng: RngStream) -> None:
        self._last_mse = train_step(net, self.problem, self.learning_rate)

    def best_value(self, net) -> float | None:
        if self._last_mse is None:
            return batch_mse(net, self.problem)
        return self._last_mse

    def parameters(self, net) -> dict[str, float]:
        return {"learning_rate": float(self.learning_rate)}


def build_ann(
    layer_sizes: Sequence[int],
    dataset: Dataset,
    rng: RngStream,
    *,
    learning_rate: float = 0.1,
    hidden_activation: str = "tanh",
    output_activation: str = "tanh",
) -> ComputingNetwork:
    """Fully connected feedforward network with uniform [-0.5, 0.5] init.

    Draw order is fixed: every synapse weight in edge-id order, then
    every non-input bias in node-id order.
    """
    topo = LayeredTopology(layer_sizes=tuple(int(s) for s in layer_sizes))
    for kind in (hidden_activation, output_activation):
        if kind not in ACTIVATIONS:
            known = ", ".join(sorted(ACTIVATIONS))
            raise ConfigurationError(f"unknown activation {kind!r} (known: {known})")
    if dataset.input_arity != topo.layer_sizes[0]:
        raise ConfigurationError(
            f"dataset input arity {dataset.input_arity} does not match "
            f"input layer size {topo.layer_sizes[0]}"
        )
    if dataset.target_arity != topo.layer_sizes[-1]:
        raise ConfigurationError(
            f"dataset target arity {dataset.target_arity} does not match "
            f"output layer size {topo.layer_sizes[-1]}"
        )

    nodes = []
    for layer, size in enumerate(topo.layer_sizes):
        if layer == 0:
            kind = "identity"
        elif layer == topo.depth - 1:
            kind = output_activation
        else:
            kind = hidden_activation
        for _ in range(size):
            nodes.append(
                NodeState(
                    id=len(nodes),
                    payload=NeuronPayload(activation=kind, bias=0.0),
                )
            )

    edges = []
    for k in range(topo.depth - 1):
        src_base = topo.node_base(k)
        dst_base = topo.node_base(k + 1)
        for j in range(topo.layer_sizes[k + 1]):
            for i in range(topo.layer_sizes[k]):
                edges.append(
                    EdgeState(
                        id=len(edges),
                        endpoints=(src_base + i, dst_base + j),
                        directed=True,
                        payload=SynapsePayload(weight=0.0),
                    )
                )

    for edge in edges:
        edge.payload.weight = float(rng.uniform(-0.5, 0.5))
    for node in nodes[topo.layer_sizes[0] :]:
        node.payload.bias = float(rng.uniform(-0.5, 0.5))

    arch = AnnArchitecture(
        topology=topo, problem=dataset, learning_rate=learning_rate
    )
    return ComputingNetwork(nodes=nodes, edges=edges, arch=arch)
