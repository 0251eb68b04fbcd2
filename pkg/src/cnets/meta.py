"""Third dynamical scale: a genetic algorithm over architecture parameters.

Each genome is a key-to-value map over declared search boxes (a subset
of AcoParams or PsoParams fields). Fitness is the mean final best value
of full inner runs, one per evaluation seed, rebuilt from scratch so a
genome's fitness is a pure function of the genome. Lower is better.

The GA is deliberately minimal: tournament selection (k=3), uniform
per-gene crossover (p=0.5), Gaussian mutation with stddev a fixed
fraction of the box width (clipped back to the box), and elitism of one.
Because fitness is cached by genome value, the carried-over elite keeps
its exact fitness and the generation-best trace is non-increasing.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Any, Callable

from .core import ComputingNetwork, RunRecord, ScaleSchedule, run
from .errors import ConfigurationError
from .rng import RngStream

Genome = dict[str, float]
# rebuild(genome, rng) -> (fresh network, its problem); consumes rng draws
# exactly like the plain two-scale builder so fitnesses are comparable.
Rebuild = Callable[[Genome, RngStream], tuple[ComputingNetwork, Any]]


@dataclass(frozen=True)
class ParamBox:
    """Closed interval a genome value must stay inside."""

    low: float
    high: float

    def __post_init__(self):
        if self.low > self.high:
            raise ConfigurationError(
                f"empty search box [{self.low}, {self.high}]"
            )

    @property
    def width(self) -> float:
        return self.high - self.low

    def clip(self, value: float) -> float:
        return min(self.high, max(self.low, value))


@dataclass(frozen=True)
class MetaConfig:
    """Genetic-algorithm settings for the meta scale."""

    population_size: int = 10
    generations: int = 10
    tournament_size: int = 3
    crossover_rate: float = 0.9
    mutation_stddev: float = 0.1
    inner_slow_steps: int = 50
    eval_seeds: tuple[int, ...] = (1,)

    def __post_init__(self):
        if self.population_size < 2:
            raise ConfigurationError(
                f"population must be >= 2, got {self.population_size}"
            )
        if self.generations < 0:
            raise ConfigurationError(f"generations must be >= 0, got {self.generations}")
        if not 1 <= self.tournament_size <= self.population_size:
            raise ConfigurationError(
                f"tournament size must be in [1, {self.population_size}], "
                f"got {self.tournament_size}"
            )
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigurationError(
                f"crossover rate must be in [0, 1], got {self.crossover_rate}"
            )
        if self.mutation_stddev < 0.0:
            raise ConfigurationError(
                f"mutation stddev must be >= 0, got {self.mutation_stddev}"
            )
        if self.inner_slow_steps < 1:
            raise ConfigurationError(
                f"inner run budget must be >= 1 slow step, got {self.inner_slow_steps}"
            )
        if not self.eval_seeds:
            raise ConfigurationError("need at least one evaluation seed")


@dataclass
class MetaSearch:
    """Everything meta_run needs beyond the GA settings.

    seed_genome, when given, joins the initial population (clipped to
    the boxes), so its fitness is a floor the search can only improve on.
    """

    config: MetaConfig
    boxes: dict[str, ParamBox]
    rebuild: Rebuild
    seed_genome: Genome | None = None


@dataclass
class MetaResult:
    best_genome: Genome
    best_fitness: float
    records: list[RunRecord] = field(default_factory=list)


def evaluate_genome(
    genome: Genome,
    rebuild: Rebuild,
    inner_slow_steps: int,
    eval_seeds: tuple[int, ...],
) -> float:
    """Mean final best value over one full inner run per seed."""
    schedule = ScaleSchedule(fast_steps_per_slow=1, slow_steps=inner_slow_steps)
    total = 0.0
    for seed in eval_seeds:
        rng = RngStream(seed)
        net, problem = rebuild(genome, rng)
        records = run(net, schedule, problem, rng)
        final = records[-1].best_value
        if final is None:
            raise ConfigurationError(
                "inner run produced no objective value to score the genome with"
            )
        total += final
    return total / len(eval_seeds)


def _genome_key(keys: tuple[str, ...], genome: Genome) -> tuple[float, ...]:
    return tuple(genome[k] for k in keys)


def meta_run(search: MetaSearch, rng: RngStream) -> MetaResult:
    """Evolve genomes for config.generations, emitting one record each.

    Records: slow_step is the generation index (0 is the evaluated
    initial population), best_value the generation-best fitness, and
    parameter_snapshot the generation-best genome.
    """
    config = search.config
    if not search.boxes:
        raise ConfigurationError("meta search needs at least one parameter box")
    keys = tuple(search.boxes)
    boxes = search.boxes

    def random_genome() -> Genome:
        return {k: float(rng.uniform(boxes[k].low, boxes[k].high)) for k in keys}

    def clipped(genome: Genome) -> Genome:
        missing = [k for k in keys if k not in genome]
        if missing:
            raise ConfigurationError(f"seed genome is missing keys {missing}")
        extra = [k for k in genome if k not in boxes]
        if extra:
            raise ConfigurationError(f"seed genome has keys outside the boxes: {extra}")
        return {k: boxes[k].clip(float(genome[k])) for k in keys}

    population: list[Genome] = []
    if search.seed_genome is not None:
        population.append(clipped(search.seed_genome))
    while len(population) < config.population_size:
        population.append(random_genome())

    cache: dict[tuple[float, ...], float] = {}

    def fitness(genome: Genome) -> float:
        key = _genome_key(keys, genome)
        if key not in cache:
            cache[key] = evaluate_genome(
                genome, search.rebuild, config.inner_slow_steps, config.eval_seeds
            )
        return cache[key]

    def tournament(fits: list[float]) -> int:
        contenders = [
            int(rng.integers(0, config.population_size))
            for _ in range(config.tournament_size)
        ]
        return min(contenders, key=lambda i: (fits[i], i))

    started = time.perf_counter()
    records: list[RunRecord] = []
    best_genome: Genome = {}
    best_fitness = float("inf")
    for generation in range(config.generations + 1):
        if generation > 0:
            fits = [fitness(g) for g in population]
            elite = min(range(len(population)), key=lambda i: (fits[i], i))
            offspring = [dict(population[elite])]
            while len(offspring) < config.population_size:
                p1 = population[tournament(fits)]
                p2 = population[tournament(fits)]
                if float(rng.uniform()) < config.crossover_rate:
                    child = {
                        k: (p1[k] if float(rng.uniform()) < 0.5 else p2[k])
                        for k in keys
                    }
                else:
                    child = dict(p1)
                for k in keys:
                    shift = float(
                        rng.normal(0.0, config.mutation_stddev * boxes[k].width)
                    )
                    child[k] = boxes[k].clip(child[k] + shift)
                offspring.append(child)
            population = offspring
        gen_fits = [fitness(g) for g in population]
        gen_best = min(range(len(population)), key=lambda i: (gen_fits[i], i))
        if gen_fits[gen_best] < best_fitness:
            best_fitness = gen_fits[gen_best]
            best_genome = dict(population[gen_best])
        records.append(
            RunRecord(
                slow_step=generation,
                best_value=gen_fits[gen_best],
                network_output=[],
                parameter_snapshot={
                    k: float(population[gen_best][k]) for k in keys
                },
                wall_clock_ms=(time.perf_counter() - started) * 1000.0,
            )
        )
        started = time.perf_counter()
    return MetaResult(
        best_genome=best_genome, best_fitness=best_fitness, records=records
    )


def three_scale_run(
    schedule: ScaleSchedule, search: MetaSearch, rng: RngStream
) -> list[RunRecord]:
    """Adapter the two-scale driver delegates to for meta schedules.

    The schedule's meta_generations overrides the GA config so a run's
    step budget has one authority.
    """
    config = replace(search.config, generations=schedule.meta_generations)
    result = meta_run(replace(search, config=config), rng)
    return result.records
