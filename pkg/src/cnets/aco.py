"""Ant-colony optimization on closed-tour problems.

Nodes are locations (their payload lists the ants currently sitting
there), edges are trails carrying a pheromone level and a fixed
desirability (reciprocal edge cost). The fast scale sends every ant on
one complete tour; the slow scale evaporates and deposits pheromone,
optionally after a local-search demon improves the iteration's best
tour. Ants prefer edges by pheromone**alpha * desirability**beta.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .core import ComputingNetwork, EdgeState, NodeState
from .errors import (
    ConfigurationError,
    DeadEndError,
    MalformedInstanceError,
    NumericDivergenceError,
)
from .problems import TourGraph
from .rng import RngStream

# Construction restarts allowed per ant per iteration before giving up.
MAX_RESTARTS = 10

DEMON_CHOICES = ("off", "two-opt")


@dataclass
class AcoParams:
    """Colony parameters; defaults follow common Ant System practice."""

    alpha: float = 1.0
    beta: float = 2.0
    evaporation: float = 0.1
    deposit: float = 1.0
    ants: int = 10
    initial_pheromone: float = 1.0
    min_pheromone: float = 1e-9
    demon: str = "off"

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ConfigurationError("alpha and beta must be >= 0")
        if not 0.0 <= self.evaporation <= 1.0:
            raise ConfigurationError(
                f"evaporation must be in [0, 1], got {self.evaporation}"
            )
        if self.deposit <= 0:
            raise ConfigurationError(f"deposit must be positive, got {self.deposit}")
        if self.ants < 1:
            raise ConfigurationError(f"need >= 1 ant, got {self.ants}")
        if self.initial_pheromone <= 0:
            raise ConfigurationError("initial_pheromone must be positive")
        if self.min_pheromone <= 0:
            raise ConfigurationError("min_pheromone must be positive")
        if self.demon not in DEMON_CHOICES:
            raise ConfigurationError(
                f"demon must be one of {DEMON_CHOICES}, got {self.demon!r}"
            )


@dataclass
class AntState:
    """One ant's walk in progress (or just completed)."""

    path: list[int] = field(default_factory=list)
    length: float = 0.0
    visited: set[int] = field(default_factory=set)


@dataclass
class LocationPayload:
    """Ants currently at this location."""

    ants: list[AntState] = field(default_factory=list)


@dataclass
class TrailPayload:
    """Adjustable pheromone plus the fixed desirability of one trail."""

    pheromone: float
    desirability: float


def transition_weights(
    candidates: Sequence[tuple[int, TrailPayload]], params: AcoParams
) -> list[float]:
    """Unnormalized preference for each candidate trail."""
    return [
        trail.pheromone**params.alpha * trail.desirability**params.beta
        for _, trail in candidates
    ]


def transition_probabilities(
    candidates: Sequence[tuple[int, TrailPayload]], params: AcoParams
) -> list[float]:
    weights = transition_weights(candidates, params)
    total = sum(weights)
    if total <= 0.0:
        raise DeadEndError("no admissible move has positive weight")
    return [w / total for w in weights]


def choose_next(
    ant: AntState,
    candidates: Sequence[tuple[int, TrailPayload]],
    params: AcoParams,
    rng: RngStream,
) -> int:
    """Sample the ant's next location among unvisited candidates."""
    admissible = [(node, trail) for node, trail in candidates if node not in ant.visited]
    if not admissible:
        raise DeadEndError("ant has no unvisited location to move to")
    weights = transition_weights(admissible, params)
    total = sum(weights)
    if total <= 0.0:
        raise DeadEndError("no admissible move has positive weight")
    threshold = float(rng.uniform(0.0, total))
    acc = 0.0
    for (node, _), w in zip(admissible, weights):
        acc += w
        if threshold < acc:
            return node
    return admissible[-1][0]


class AcoArchitecture:
    """Colony behaviour: fast = construct tours, slow = pheromone update."""

    kind = "aco"
    input_arity = 0
    allow_hyperedges = False

    def __init__(self, graph: TourGraph, params: AcoParams):
        self.problem = graph
        self.params = params
        n = graph.n
        # trail lookup by unordered node pair
        self._edge_index: dict[tuple[int, int], int] = {}
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                self._edge_index[(i, j)] = k
                k += 1
        self.best_path_found: list[int] | None = None
        self.best_length: float | None = None
        self._iteration_solutions: list[tuple[list[int], float]] = []

    def check_problem(self, problem) -> None:
        if problem != self.problem:
            raise ConfigurationError("network was built for a different graph")

    def trail(self, net: ComputingNetwork, i: int, j: int) -> TrailPayload:
        if i == j:
            raise ConfigurationError(f"no trail from node {i} to itself")
        key = (i, j) if i < j else (j, i)
        return net.edges[self._edge_index[key]].payload

    def next_input(self, net, slow_index, fast_index) -> list[float]:
        return []

    def fast(self, net, inputs, rng: RngStream) -> None:
        self._iteration_solutions = construct_solutions(net, self.params, rng)
        for path, length in self._iteration_solutions:
            self._offer_best(path, length)

    def _offer_best(self, path: list[int], length: float) -> None:
        if self.best_length is None or length < self.best_length:
            self.best_length = length
            self.best_path_found = list(path)

    def readout(self, net) -> list[float]:
        if self.best_path_found is None:
            return []
        return [float(v) for v in self.best_path_found]

    def collect(self, net, outputs):
        return self._iteration_solutions

    def slow(self, net, feedback, rng: RngStream) -> None:
        solutions = list(feedback)
        evaporate(net, self.params.evaporation)
        if self.params.demon == "two-opt" and solutions:
            index = min(range(len(solutions)), key=lambda k: solutions[k][1])
            path, _ = solutions[index]
            improved = demon_local_search(path, self.problem)
            improved_length = self.problem.tour_length(improved)
            solutions[index] = (improved, improved_length)
            self._offer_best(improved, improved_length)
        deposit(net, solutions, self.params.deposit)

    def best_value(self, net) -> float | None:
        return self.best_length

    def parameters(self, net) -> dict[str, float]:
        p = self.params
        return {
            "alpha": float(p.alpha),
            "beta": float(p.beta),
            "evaporation": float(p.evaporation),
            "deposit": float(p.deposit),
            "ants": float(p.ants),
            "initial_pheromone": float(p.initial_pheromone),
            "min_pheromone": float(p.min_pheromone),
            "demon": 1.0 if p.demon == "two-opt" else 0.0,
        }


def _construct_one(
    net: ComputingNetwork, start: int, params: AcoParams, rng: RngStream
) -> AntState:
    graph: TourGraph = net.arch.problem
    arch: AcoArchitecture = net.arch
    n = graph.n
    ant = AntState(path=[start], length=0.0, visited={start})
    net.nodes[start].payload.ants.append(ant)
    try:
        while len(ant.path) < n:
            here = ant.path[-1]
            candidates = [
                (node, arch.trail(net, here, node)) for node in range(n) if node != here
            ]
            nxt = choose_next(ant, candidates, params, rng)
            net.nodes[here].payload.ants.remove(ant)
            net.nodes[nxt].payload.ants.append(ant)
            ant.length += graph.cost(here, nxt)
            ant.path.append(nxt)
            ant.visited.add(nxt)
    except DeadEndError:
        net.nodes[ant.path[-1]].payload.ants.remove(ant)
        raise
    ant.length += graph.cost(ant.path[-1], ant.path[0])
    if not ant.length < float("inf"):
        raise NumericDivergenceError(f"tour length diverged at node {ant.path[-1]}")
    return ant


def construct_solutions(
    net: ComputingNetwork, params: AcoParams, rng: RngStream
) -> list[tuple[list[int], float]]:
    """Send every ant on one complete closed tour.

    On a complete graph no walk can dead-end, but the restart bound
    still guards custom payload states that zero out every trail.
    """
    graph: TourGraph = net.arch.problem
    solutions = []
    for _ in range(params.ants):
        start = int(rng.integers(0, graph.n))
        restarts = 0
        while True:
            try:
                ant = _construct_one(net, start, params, rng)
                break
            except DeadEndError:
                restarts += 1
                if restarts > MAX_RESTARTS:
                    raise
        solutions.append((ant.path, ant.length))
        net.nodes[ant.path[-1]].payload.ants.remove(ant)
    return solutions


def evaporate(net: ComputingNetwork, rate: float) -> None:
    """Decay every trail, clamped to the architecture's pheromone floor."""
    if not 0.0 <= rate <= 1.0:
        raise ConfigurationError(f"evaporation rate must be in [0, 1], got {rate}")
    floor = net.arch.params.min_pheromone
    for edge in net.edges:
        edge.payload.pheromone = max(floor, (1.0 - rate) * edge.payload.pheromone)


def deposit(
    net: ComputingNetwork, solutions: Sequence[tuple[Sequence[int], float]], amount: float
) -> None:
    """Every solution reinforces its tour edges by amount / tour length."""
    arch: AcoArchitecture = net.arch
    for path, length in solutions:
        if length <= 0.0:
            raise MalformedInstanceError(
                f"tour length must be positive to deposit, got {length}"
            )
        share = amount / length
        for k in range(len(path)):
            trail = arch.trail(net, path[k], path[(k + 1) % len(path)])
            trail.pheromone += share


def demon_local_search(path: Sequence[int], graph: TourGraph) -> list[int]:
    """2-opt: reverse segments while any reversal shortens the closed tour."""
    tour = list(path)
    n = len(tour)
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue  # reversing the whole tour changes nothing
                a, b = tour[i], tour[i + 1]
                c, d = tour[j], tour[(j + 1) % n]
                delta = (
                    graph.cost(a, c) + graph.cost(b, d)
                    - graph.cost(a, b) - graph.cost(c, d)
                )
                if delta < -1e-12:
                    tour[i + 1 : j + 1] = reversed(tour[i + 1 : j + 1])
                    improved = True
    return tour


def best_path(net: ComputingNetwork) -> list[int] | None:
    """Best closed tour found so far, or None before any construction."""
    found = net.arch.best_path_found
    return None if found is None else list(found)


def build_aco_network(
    graph: TourGraph, params: AcoParams | None = None
) -> ComputingNetwork:
    """Complete trail network over the graph's locations."""
    params = params or AcoParams()
    nodes = [NodeState(id=i, payload=LocationPayload()) for i in range(graph.n)]
    edges = []
    for i in range(graph.n):
        for j in range(i + 1, graph.n):
            edges.append(
                EdgeState(
                    id=len(edges),
                    endpoints=(i, j),
                    directed=False,
                    payload=TrailPayload(
                        pheromone=params.initial_pheromone,
                        desirability=1.0 / graph.cost(i, j),
                    ),
                )
            )
    arch = AcoArchitecture(graph=graph, params=params)
    return ComputingNetwork(nodes=nodes, edges=edges, arch=arch)
