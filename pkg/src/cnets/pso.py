"""Particle-swarm optimization with inertia weight.

Nodes are particles (position, velocity, personal best); every particle
owns one hyperedge listing its whole neighborhood, and the edge payload
caches that neighborhood's best. The fast scale evaluates the objective
and updates personal bests; the slow scale refreshes neighborhood bests
and applies the velocity and position update. Minimization throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import math

import numpy as np

from .core import ComputingNetwork, EdgeState, NodeState
from .errors import ConfigurationError, NumericDivergenceError
from .problems import Objective
from .rng import RngStream

TOPOLOGIES = ("ring", "global", "custom")


@dataclass
class PsoParams:
    """Swarm parameters; the usual constricted-inertia defaults.

    velocity_clamp 0 means unclamped; a positive value bounds each
    velocity component to [-clamp, clamp].
    """

    inertia: float = 0.72
    cognitive: float = 1.49
    social: float = 1.49
    velocity_clamp: float = 0.0
    particles: int = 30
    topology: str = "ring"
    neighborhoods: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if not math.isfinite(self.inertia):
            raise ConfigurationError(f"inertia must be finite, got {self.inertia}")
        if self.cognitive < 0 or self.social < 0:
            raise ConfigurationError("cognitive and social weights must be >= 0")
        if self.velocity_clamp < 0:
            raise ConfigurationError(
                f"velocity_clamp must be >= 0, got {self.velocity_clamp}"
            )
        if self.particles < 2:
            raise ConfigurationError(f"need >= 2 particles, got {self.particles}")
        if self.topology not in TOPOLOGIES:
            raise ConfigurationError(
                f"topology must be one of {TOPOLOGIES}, got {self.topology!r}"
            )
        if self.topology == "custom":
            if not self.neighborhoods:
                raise ConfigurationError("custom topology needs explicit neighborhoods")
            if len(self.neighborhoods) != self.particles:
                raise ConfigurationError(
                    f"need one neighborhood per particle "
                    f"({self.particles}), got {len(self.neighborhoods)}"
                )
            for i, members in enumerate(self.neighborhoods):
                if i not in members:
                    raise ConfigurationError(
                        f"particle {i} must belong to its own neighborhood"
                    )
                if len(set(members)) < 2:
                    raise ConfigurationError(
                        f"neighborhood of particle {i} needs >= 2 distinct members"
                    )
                bad = [m for m in members if not 0 <= m < self.particles]
                if bad:
                    raise ConfigurationError(
                        f"neighborhood of particle {i} has unknown members {bad}"
                    )
        elif self.neighborhoods is not None:
            raise ConfigurationError(
                "explicit neighborhoods require the custom topology"
            )


@dataclass
class ParticlePayload:
    """One particle's kinematic state and personal best."""

    position: np.ndarray
    velocity: np.ndarray
    value: float
    best_position: np.ndarray
    best_value: float


@dataclass
class NeighborhoodPayload:
    """Cached best over the member particles' personal bests."""

    best_position: np.ndarray
    best_value: float


def ring_distance(n: int, i: int, j: int) -> int:
    """Hop count between two indices on a ring of n positions."""
    if n < 1:
        raise ConfigurationError(f"ring needs >= 1 position, got {n}")
    forward = (j - i) % n
    return min(forward, n - forward)


def _neighborhood_members(params: PsoParams) -> list[tuple[int, ...]]:
    n = params.particles
    if params.topology == "ring":
        return [
            tuple(j for j in range(n) if ring_distance(n, i, j) <= 1) for i in range(n)
        ]
    if params.topology == "global":
        return [tuple(range(n))] * n
    assert params.neighborhoods is not None
    return [tuple(sorted(set(members))) for members in params.neighborhoods]


def evaluate(net: ComputingNetwork, objective: Objective) -> None:
    """Evaluate every particle and update personal bests (strict improvement)."""
    for node in net.nodes:
        p = node.payload
        value = objective(p.position)
        if not math.isfinite(value):
            raise NumericDivergenceError(
                f"particle {node.id} produced non-finite value {value!r}"
            )
        p.value = value
        if value < p.best_value:
            p.best_value = value
            p.best_position = p.position.copy()


def neighborhood_best(
    net: ComputingNetwork, members: Sequence[int]
) -> tuple[np.ndarray, float]:
    """Best personal best among the members; ties go to the lowest id."""
    best = min(members, key=lambda i: (net.nodes[i].payload.best_value, i))
    p = net.nodes[best].payload
    return p.best_position.copy(), p.best_value


def refresh_neighborhoods(net: ComputingNetwork) -> None:
    for edge in net.edges:
        position, value = neighborhood_best(net, edge.endpoints)
        edge.payload.best_position = position
        edge.payload.best_value = value


def move(net: ComputingNetwork, params: PsoParams, rng: RngStream) -> None:
    """One velocity-position update for every particle, in id order.

    Each particle draws two fresh uniform vectors (cognitive then
    social), one component per dimension.
    """
    for node in net.nodes:
        p = node.payload
        d = p.position.size
        r_cognitive = rng.uniform(0.0, 1.0, size=d)
        r_social = rng.uniform(0.0, 1.0, size=d)
        local = net.edges[net.arch.edge_of_particle[node.id]].payload
        velocity = (
            params.inertia * p.velocity
            + params.cognitive * r_cognitive * (p.best_position - p.position)
            + params.social * r_social * (local.best_position - p.position)
        )
        if params.velocity_clamp > 0.0:
            velocity = np.clip(velocity, -params.velocity_clamp, params.velocity_clamp)
        p.velocity = velocity
        p.position = p.position + velocity


def global_best(net: ComputingNetwork) -> tuple[np.ndarray, float]:
    """Best personal best across the whole swarm; ties to the lowest id."""
    return neighborhood_best(net, range(len(net.nodes)))


class PsoArchitecture:
    """Swarm behaviour: fast = evaluate, slow = refresh neighborhoods and move."""

    kind = "pso"
    input_arity = 0
    allow_hyperedges = True

    def __init__(self, objective: Objective, params: PsoParams):
        self.problem = objective
        self.params = params
        # particle id -> id of the hyperedge holding its neighborhood
        self.edge_of_particle: dict[int, int] = {}

    def check_problem(self, problem) -> None:
        if problem != self.problem:
            raise ConfigurationError("network was built for a different objective")

    def next_input(self, net, slow_index, fast_index) -> list[float]:
        return []

    def fast(self, net, inputs, rng: RngStream) -> None:
        evaluate(net, self.problem)

    def readout(self, net) -> list[float]:
        position, _ = global_best(net)
        return [float(v) for v in position]

    def collect(self, net, outputs):
        return outputs

    def slow(self, net, feedback, rng: RngStream) -> None:
        refresh_neighborhoods(net)
        move(net, self.params, rng)

    def best_value(self, net) -> float | None:
        _, value = global_best(net)
        return value

    def parameters(self, net) -> dict[str, float]:
        p = self.params
        return {
            "inertia": float(p.inertia),
            "cognitive": float(p.cognitive),
            "social": float(p.social),
            "velocity_clamp": float(p.velocity_clamp),
            "particles": float(p.particles),
        }


def build_pso_network(
    objective: Objective, rng: RngStream, params: PsoParams | None = None
) -> ComputingNetwork:
    """Swarm over the objective's box, personal bests seeded by evaluation.

    Draw order is fixed: for each particle in id order, one position
    vector uniform in the box, then one velocity vector uniform in
    +/- (box width / 10) per dimension. Particles sharing an identical
    neighborhood share one hyperedge, so the global topology yields a
    single edge spanning the swarm.
    """
    params = params or PsoParams()
    d = objective.dimension
    lo, hi = objective.lower, objective.upper
    vspan = (hi - lo) / 10.0
    nodes = []
    for i in range(params.particles):
        position = rng.uniform(lo, hi, size=d)
        velocity = rng.uniform(-vspan, vspan, size=d)
        nodes.append(
            NodeState(
                id=i,
                payload=ParticlePayload(
                    position=position,
                    velocity=velocity,
                    value=float("inf"),
                    best_position=position.copy(),
                    best_value=float("inf"),
                ),
            )
        )
    arch = PsoArchitecture(objective=objective, params=params)
    edges = []
    edge_by_members: dict[tuple[int, ...], int] = {}
    for i, members in enumerate(_neighborhood_members(params)):
        if members not in edge_by_members:
            edge_by_members[members] = len(edges)
            edges.append(
                EdgeState(
                    id=len(edges),
                    endpoints=members,
                    directed=False,
                    payload=NeighborhoodPayload(
                        best_position=np.zeros(d), best_value=float("inf")
                    ),
                )
            )
        arch.edge_of_particle[i] = edge_by_members[members]
    net = ComputingNetwork(nodes=nodes, edges=edges, arch=arch)
    evaluate(net, objective)
    refresh_neighborhoods(net)
    return net
