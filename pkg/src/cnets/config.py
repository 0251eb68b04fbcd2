"""Run configuration: a strict JSON schema with full default echoing.

Every run is described by one JSON object. Exactly one architecture
section (ann / aco / pso / eca) may be present for a plain run, or a
cross section alone for the swarm-trains-network composition. Unknown
keys anywhere are hard errors, file references are checked at load
time, and load_config fills every default so the config echoed into a
record header is complete. Relative paths are resolved against the
config file's directory.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .core import ScaleSchedule, UpdateMode
from .errors import ConfigurationError

ARCHITECTURES = ("ann", "aco", "pso", "eca")

# Real-valued parameters the meta scale may search over, per architecture.
META_SEARCHABLE = {
    "aco": ("alpha", "beta", "evaporation", "deposit", "initial_pheromone", "min_pheromone"),
    "pso": ("inertia", "cognitive", "social", "velocity_clamp"),
}

UPDATE_MODES = {mode.value: mode for mode in UpdateMode}


def _check_keys(data: Mapping[str, Any], allowed: Sequence[str], where: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigurationError(f"{where}: unknown keys {unknown}")


def _get(data: Mapping[str, Any], key: str, where: str, kind, default=None, required=False):
    # an explicit JSON null means the same as an absent key
    if key not in data or data[key] is None:
        if required:
            raise ConfigurationError(f"{where}: missing required key {key!r}")
        return default
    value = data[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(f"{where}.{key}: expected a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigurationError(f"{where}.{key}: expected an integer, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigurationError(f"{where}.{key}: expected a string, got {value!r}")
        return value
    if kind is list:
        if not isinstance(value, list):
            raise ConfigurationError(f"{where}.{key}: expected a list, got {value!r}")
        return value
    if kind is dict:
        if not isinstance(value, dict):
            raise ConfigurationError(f"{where}.{key}: expected an object, got {value!r}")
        return value
    raise AssertionError(f"unhandled kind {kind}")


def _number_pair(value: Any, where: str) -> tuple[float, float]:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise ConfigurationError(f"{where}: expected a [low, high] number pair, got {value!r}")
    return float(value[0]), float(value[1])


def _resolve_path(path: str, base_dir: str, where: str) -> str:
    resolved = path if os.path.isabs(path) else os.path.normpath(os.path.join(base_dir, path))
    if not os.path.isfile(resolved):
        raise ConfigurationError(f"{where}: referenced file does not exist: {resolved}")
    return resolved


@dataclass
class AnnSection:
    layers: tuple[int, ...]
    dataset: str
    learning_rate: float = 0.1
    hidden_activation: str = "tanh"
    output_activation: str = "tanh"

    def to_dict(self) -> dict[str, Any]:
        return {
            "layers": list(self.layers),
            "dataset": self.dataset,
            "learning_rate": self.learning_rate,
            "hidden_activation": self.hidden_activation,
            "output_activation": self.output_activation,
        }

    @classmethod
    def parse(cls, data: Mapping[str, Any], base_dir: str, where: str) -> "AnnSection":
        _check_keys(data, ("layers", "dataset", "learning_rate", "hidden_activation", "output_activation"), where)
        layers = _get(data, "layers", where, list, required=True)
        if len(layers) < 2 or any(isinstance(v, bool) or not isinstance(v, int) or v < 1 for v in layers):
            raise ConfigurationError(f"{where}.layers: expected >= 2 positive integers, got {layers!r}")
        dataset = _resolve_path(_get(data, "dataset", where, str, required=True), base_dir, f"{where}.dataset")
        section = cls(
            layers=tuple(layers),
            dataset=dataset,
            learning_rate=_get(data, "learning_rate", where, float, default=0.1),
            hidden_activation=_get(data, "hidden_activation", where, str, default="tanh"),
            output_activation=_get(data, "output_activation", where, str, default="tanh"),
        )
        if section.learning_rate <= 0:
            raise ConfigurationError(f"{where}.learning_rate: must be positive")
        from .ann import ACTIVATIONS

        for key in ("hidden_activation", "output_activation"):
            kind = getattr(section, key)
            if kind not in ACTIVATIONS:
                raise ConfigurationError(
                    f"{where}.{key}: unknown activation {kind!r} "
                    f"(known: {', '.join(sorted(ACTIVATIONS))})"
                )
        return section


@dataclass
class AcoSection:
    graph: str
    graph_format: str = "coords"
    alpha: float = 1.0
    beta: float = 2.0
    evaporation: float = 0.1
    deposit: float = 1.0
    ants: int = 10
    initial_pheromone: float = 1.0
    min_pheromone: float = 1e-9
    demon: str = "off"

    def to_dict(self) -> dict[str, Any]:
        return {
            "graph": self.graph,
            "graph_format": self.graph_format,
            "alpha": self.alpha,
            "beta": self.beta,
            "evaporation": self.evaporation,
            "deposit": self.deposit,
            "ants": self.ants,
            "initial_pheromone": self.initial_pheromone,
            "min_pheromone": self.min_pheromone,
            "demon": self.demon,
        }

    @classmethod
    def parse(cls, data: Mapping[str, Any], base_dir: str, where: str) -> "AcoSection":
        _check_keys(
            data,
            ("graph", "graph_format", "alpha", "beta", "evaporation", "deposit",
             "ants", "initial_pheromone", "min_pheromone", "demon"),
            where,
        )
        graph_format = _get(data, "graph_format", where, str, default="coords")
        if graph_format not in ("coords", "matrix"):
            raise ConfigurationError(f"{where}.graph_format: expected coords or matrix")
        section = cls(
            graph=_resolve_path(_get(data, "graph", where, str, required=True), base_dir, f"{where}.graph"),
            graph_format=graph_format,
            alpha=_get(data, "alpha", where, float, default=1.0),
            beta=_get(data, "beta", where, float, default=2.0),
            evaporation=_get(data, "evaporation", where, float, default=0.1),
            deposit=_get(data, "deposit", where, float, default=1.0),
            ants=_get(data, "ants", where, int, default=10),
            initial_pheromone=_get(data, "initial_pheromone", where, float, default=1.0),
            min_pheromone=_get(data, "min_pheromone", where, float, default=1e-9),
            demon=_get(data, "demon", where, str, default="off"),
        )
        section.to_params()  # surface value errors at load time
        return section

    def to_params(self):
        from .aco import AcoParams

        return AcoParams(
            alpha=self.alpha,
            beta=self.beta,
            evaporation=self.evaporation,
            deposit=self.deposit,
            ants=self.ants,
            initial_pheromone=self.initial_pheromone,
            min_pheromone=self.min_pheromone,
            demon=self.demon,
        )


@dataclass
class PsoSection:
    objective: str
    dimension: int
    bounds: tuple[float, float] | None = None
    particles: int = 30
    inertia: float = 0.72
    cognitive: float = 1.49
    social: float = 1.49
    velocity_clamp: float = 0.0
    topology: str = "ring"
    neighborhoods: tuple[tuple[int, ...], ...] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "objective": self.objective,
            "dimension": self.dimension,
            "bounds": None if self.bounds is None else list(self.bounds),
            "particles": self.particles,
            "inertia": self.inertia,
            "cognitive": self.cognitive,
            "social": self.social,
            "velocity_clamp": self.velocity_clamp,
            "topology": self.topology,
        }
        if self.neighborhoods is not None:
            out["neighborhoods"] = [list(m) for m in self.neighborhoods]
        return out

    @classmethod
    def parse(cls, data: Mapping[str, Any], base_dir: str, where: str) -> "PsoSection":
        _check_keys(
            data,
            ("objective", "dimension", "bounds", "particles", "inertia", "cognitive",
             "social", "velocity_clamp", "topology", "neighborhoods"),
            where,
        )
        dimension = _get(data, "dimension", where, int, required=True)
        if dimension < 1:
            raise ConfigurationError(f"{where}.dimension: must be >= 1, got {dimension}")
        bounds = None
        if data.get("bounds") is not None:
            bounds = _number_pair(data["bounds"], f"{where}.bounds")
        neighborhoods = None
        if data.get("neighborhoods") is not None:
            raw = _get(data, "neighborhoods", where, list)
            for i, members in enumerate(raw):
                if not isinstance(members, list) or any(
                    isinstance(m, bool) or not isinstance(m, int) for m in members
                ):
                    raise ConfigurationError(
                        f"{where}.neighborhoods[{i}]: expected a list of particle ids"
                    )
            neighborhoods = tuple(tuple(members) for members in raw)
        section = cls(
            objective=_get(data, "objective", where, str, default="sphere"),
            dimension=dimension,
            bounds=bounds,
            particles=_get(data, "particles", where, int, default=30),
            inertia=_get(data, "inertia", where, float, default=0.72),
            cognitive=_get(data, "cognitive", where, float, default=1.49),
            social=_get(data, "social", where, float, default=1.49),
            velocity_clamp=_get(data, "velocity_clamp", where, float, default=0.0),
            topology=_get(data, "topology", where, str, default="ring"),
            neighborhoods=neighborhoods,
        )
        section.to_params()  # surface value errors at load time
        return section

    def to_params(self):
        from .pso import PsoParams

        return PsoParams(
            inertia=self.inertia,
            cognitive=self.cognitive,
            social=self.social,
            velocity_clamp=self.velocity_clamp,
            particles=self.particles,
            topology=self.topology,
            neighborhoods=self.neighborhoods,
        )


@dataclass
class EcaSection:
    rule: int
    width: int
    steps: int | None = None
    boundary: str = "fixed-zero"
    initial: str | tuple[int, ...] = "single-one"
    updating: str = "synchronous"

    def to_dict(self) -> dict[str, Any]:
        return {
            "rule": self.rule,
            "width": self.width,
            "steps": self.steps,
            "boundary": self.boundary,
            "initial": self.initial if isinstance(self.initial, str) else list(self.initial),
            "updating": self.updating,
        }

    @classmethod
    def parse(cls, data: Mapping[str, Any], base_dir: str, where: str) -> "EcaSection":
        _check_keys(data, ("rule", "width", "steps", "boundary", "initial", "updating"), where)
        initial: str | tuple[int, ...] = "single-one"
        if "initial" in data:
            raw = data["initial"]
            if isinstance(raw, str):
                if raw != "single-one":
                    raise ConfigurationError(
                        f"{where}.initial: expected \"single-one\" or a 0/1 list, got {raw!r}"
                    )
                initial = raw
            elif isinstance(raw, list):
                if any(isinstance(v, bool) or v not in (0, 1) for v in raw):
                    raise ConfigurationError(f"{where}.initial: cells must all be 0 or 1")
                initial = tuple(int(v) for v in raw)
            else:
                raise ConfigurationError(
                    f"{where}.initial: expected \"single-one\" or a 0/1 list, got {raw!r}"
                )
        updating = _get(data, "updating", where, str, default="synchronous")
        if updating not in UPDATE_MODES:
            raise ConfigurationError(
                f"{where}.updating: expected one of {sorted(UPDATE_MODES)}, got {updating!r}"
            )
        section = cls(
            rule=_get(data, "rule", where, int, required=True),
            width=_get(data, "width", where, int, required=True),
            steps=_get(data, "steps", where, int),
            boundary=_get(data, "boundary", where, str, default="fixed-zero"),
            initial=initial,
            updating=updating,
        )
        if not 0 <= section.rule <= 255:
            raise ConfigurationError(f"{where}.rule: must be in [0, 255], got {section.rule}")
        if section.width < 3:
            raise ConfigurationError(f"{where}.width: must be >= 3, got {section.width}")
        if isinstance(section.initial, tuple) and len(section.initial) != section.width:
            raise ConfigurationError(
                f"{where}.initial: got {len(section.initial)} cells for width {section.width}"
            )
        if section.steps is not None and section.steps < 0:
            raise ConfigurationError(f"{where}.steps: must be >= 0, got {section.steps}")
        return section


@dataclass
class MetaSection:
    parameters: dict[str, tuple[float, float]]
    population_size: int = 10
    generations: int = 10
    tournament_size: int = 3
    crossover_rate: float = 0.9
    mutation_stddev: float = 0.1
    inner_slow_steps: int = 50
    eval_seeds: tuple[int, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "parameters": {k: list(v) for k, v in self.parameters.items()},
            "population_size": self.population_size,
            "generations": self.generations,
            "tournament_size": self.tournament_size,
            "crossover_rate": self.crossover_rate,
            "mutation_stddev": self.mutation_stddev,
            "inner_slow_steps": self.inner_slow_steps,
            "eval_seeds": list(self.eval_seeds),
        }

    @classmethod
    def parse(cls, data: Mapping[str, Any], where: str) -> "MetaSection":
        _check_keys(
            data,
            ("parameters", "population_size", "generations", "tournament_size",
             "crossover_rate", "mutation_stddev", "inner_slow_steps", "eval_seeds"),
            where,
        )
        raw_params = _get(data, "parameters", where, dict, required=True)
        if not raw_params:
            raise ConfigurationError(f"{where}.parameters: need at least one search box")
        parameters = {
            key: _number_pair(box, f"{where}.parameters.{key}")
            for key, box in raw_params.items()
        }
        raw_seeds = _get(data, "eval_seeds", where, list, required=True)
        if not raw_seeds or any(isinstance(s, bool) or not isinstance(s, int) for s in raw_seeds):
            raise ConfigurationError(f"{where}.eval_seeds: expected a non-empty list of integers")
        return cls(
            parameters=parameters,
            population_size=_get(data, "population_size", where, int, default=10),
            generations=_get(data, "generations", where, int, default=10),
            tournament_size=_get(data, "tournament_size", where, int, default=3),
            crossover_rate=_get(data, "crossover_rate", where, float, default=0.9),
            mutation_stddev=_get(data, "mutation_stddev", where, float, default=0.1),
            inner_slow_steps=_get(data, "inner_slow_steps", where, int, default=50),
            eval_seeds=tuple(raw_seeds),
        )


@dataclass
class CrossSection:
    """Outer swarm settings plus the inner network it trains."""

    ann: AnnSection
    pso_particles: int = 30
    pso_inertia: float = 0.72
    pso_cognitive: float = 1.49
    pso_social: float = 1.49
    pso_velocity_clamp: float = 0.0
    pso_topology: str = "ring"
    weight_bounds: tuple[float, float] = (-2.0, 2.0)
    dimension: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "ann": self.ann.to_dict(),
            "pso": {
                "particles": self.pso_particles,
                "inertia": self.pso_inertia,
                "cognitive": self.pso_cognitive,
                "social": self.pso_social,
                "velocity_clamp": self.pso_velocity_clamp,
                "topology": self.pso_topology,
            },
            "weight_bounds": list(self.weight_bounds),
            "dimension": self.dimension,
        }

    @classmethod
    def parse(cls, data: Mapping[str, Any], base_dir: str, where: str) -> "CrossSection":
        _check_keys(data, ("ann", "pso", "weight_bounds", "dimension"), where)
        ann = AnnSection.parse(_get(data, "ann", where, dict, required=True), base_dir, f"{where}.ann")
        pso_raw = _get(data, "pso", where, dict, default={})
        _check_keys(
            pso_raw,
            ("particles", "inertia", "cognitive", "social", "velocity_clamp", "topology"),
            f"{where}.pso",
        )
        weight_bounds = (-2.0, 2.0)
        if data.get("weight_bounds") is not None:
            weight_bounds = _number_pair(data["weight_bounds"], f"{where}.weight_bounds")
        if not weight_bounds[0] < weight_bounds[1]:
            raise ConfigurationError(f"{where}.weight_bounds: need low < high")
        dimension = _get(data, "dimension", where, int)
        if dimension is not None and dimension < 1:
            raise ConfigurationError(f"{where}.dimension: must be >= 1, got {dimension}")
        topology = _get(pso_raw, "topology", f"{where}.pso", str, default="ring")
        if topology not in ("ring", "global"):
            raise ConfigurationError(
                f"{where}.pso.topology: cross runs support ring or global, got {topology!r}"
            )
        return cls(
            ann=ann,
            pso_particles=_get(pso_raw, "particles", f"{where}.pso", int, default=30),
            pso_inertia=_get(pso_raw, "inertia", f"{where}.pso", float, default=0.72),
            pso_cognitive=_get(pso_raw, "cognitive", f"{where}.pso", float, default=1.49),
            pso_social=_get(pso_raw, "social", f"{where}.pso", float, default=1.49),
            pso_velocity_clamp=_get(pso_raw, "velocity_clamp", f"{where}.pso", float, default=0.0),
            pso_topology=topology,
            weight_bounds=weight_bounds,
            dimension=dimension,
        )


@dataclass
class RunConfig:
    architecture: str
    schedule: ScaleSchedule
    seed: int | None = None
    out: str | None = None
    ann: AnnSection | None = None
    aco: AcoSection | None = None
    pso: PsoSection | None = None
    eca: EcaSection | None = None
    meta: MetaSection | None = None
    cross: CrossSection | None = None

    def section(self):
        return getattr(self, self.architecture) if self.architecture in ARCHITECTURES else self.cross

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "architecture": self.architecture,
            "seed": self.seed,
            "out": self.out,
            "schedule": {
                "fast_steps_per_slow": self.schedule.fast_steps_per_slow,
                "slow_steps": self.schedule.slow_steps,
                "meta_generations": self.schedule.meta_generations,
            },
        }
        for name in ARCHITECTURES:
            sect = getattr(self, name)
            if sect is not None:
                out[name] = sect.to_dict()
        if self.meta is not None:
            out["meta"] = self.meta.to_dict()
        if self.cross is not None:
            out["cross"] = self.cross.to_dict()
        return out


_TOP_KEYS = ("architecture", "seed", "out", "schedule") + ARCHITECTURES + ("meta", "cross")


def build_config(data: Mapping[str, Any], base_dir: str = ".") -> RunConfig:
    """Validate a parsed JSON object and fill every default."""
    if not isinstance(data, dict):
        raise ConfigurationError(f"config must be a JSON object, got {type(data).__name__}")
    _check_keys(data, _TOP_KEYS, "config")

    sections_present = [name for name in ARCHITECTURES if name in data]
    cross_present = "cross" in data
    if cross_present and sections_present:
        raise ConfigurationError(
            f"config: cross runs take no architecture section, found {sections_present}"
        )
    if not cross_present:
        if len(sections_present) == 0:
            raise ConfigurationError("config: no architecture section present")
        if len(sections_present) > 1:
            raise ConfigurationError(
                f"config: exactly one architecture section allowed, found {sections_present}"
            )

    declared = _get(data, "architecture", "config", str)
    architecture = "cross" if cross_present else sections_present[0]
    if declared is not None and declared != architecture:
        raise ConfigurationError(
            f"config.architecture: declared {declared!r} but the config describes {architecture!r}"
        )

    seed = None
    if data.get("seed") is not None:
        seed = _get(data, "seed", "config", int)
        if seed < 0:
            raise ConfigurationError(f"config.seed: must be >= 0, got {seed}")
    out = _get(data, "out", "config", str)
    if out is not None and not os.path.isabs(out):
        # outputs resolve like inputs: against the config's directory
        out = os.path.normpath(os.path.join(base_dir, out))

    sched_raw = _get(data, "schedule", "config", dict, default={})
    _check_keys(sched_raw, ("fast_steps_per_slow", "slow_steps", "meta_generations"), "config.schedule")
    fast = _get(sched_raw, "fast_steps_per_slow", "config.schedule", int, default=1)
    slow = _get(sched_raw, "slow_steps", "config.schedule", int)
    meta_gens = _get(sched_raw, "meta_generations", "config.schedule", int)

    kwargs: dict[str, Any] = {}
    if architecture == "ann":
        kwargs["ann"] = AnnSection.parse(data["ann"], base_dir, "config.ann")
    elif architecture == "aco":
        kwargs["aco"] = AcoSection.parse(data["aco"], base_dir, "config.aco")
    elif architecture == "pso":
        from .problems import named_objective

        section = PsoSection.parse(data["pso"], base_dir, "config.pso")
        obj = named_objective(section.objective, section.dimension, section.bounds)
        section.bounds = (obj.lower, obj.upper)
        kwargs["pso"] = section
    elif architecture == "eca":
        section = EcaSection.parse(data["eca"], base_dir, "config.eca")
        if section.steps is not None:
            if slow is not None and slow != section.steps:
                raise ConfigurationError(
                    f"config: eca.steps ({section.steps}) disagrees with "
                    f"schedule.slow_steps ({slow})"
                )
            slow = section.steps
        kwargs["eca"] = section
    else:
        kwargs["cross"] = CrossSection.parse(data["cross"], base_dir, "config.cross")

    if "meta" in data:
        if architecture not in META_SEARCHABLE:
            raise ConfigurationError(
                f"config.meta: meta search supports {sorted(META_SEARCHABLE)}, not {architecture!r}"
            )
        meta = MetaSection.parse(data["meta"], "config.meta")
        allowed = META_SEARCHABLE[architecture]
        bad = sorted(set(meta.parameters) - set(allowed))
        if bad:
            raise ConfigurationError(
                f"config.meta.parameters: {bad} not searchable for {architecture} "
                f"(allowed: {list(allowed)})"
            )
        kwargs["meta"] = meta
        if meta_gens is None:
            meta_gens = meta.generations
        elif meta_gens != meta.generations:
            raise ConfigurationError(
                f"config: schedule.meta_generations ({meta_gens}) disagrees with "
                f"meta.generations ({meta.generations})"
            )
    elif meta_gens:
        raise ConfigurationError(
            "config: schedule.meta_generations > 0 requires a meta section"
        )

    schedule = ScaleSchedule(
        fast_steps_per_slow=fast,
        slow_steps=0 if slow is None else slow,
        meta_generations=0 if meta_gens is None else meta_gens,
    )
    if architecture == "eca":
        kwargs["eca"].steps = schedule.slow_steps
    return RunConfig(
        architecture=architecture,
        schedule=schedule,
        seed=seed,
        out=out,
        **kwargs,
    )


def load_config(path: str) -> RunConfig:
    """Read, parse, and validate one JSON config file."""
    try:
        with open(path) as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}"
        ) from None
    return build_config(data, base_dir=os.path.dirname(os.path.abspath(path)))


def write_config(config: RunConfig, path: str) -> None:
    """Write the fully resolved form; load_config(path) then round-trips."""
    with open(path, "w") as handle:
        json.dump(config.to_dict(), handle, indent=2)
        handle.write("\n")
