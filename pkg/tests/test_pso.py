import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cnets.core import ScaleSchedule, run
from cnets.errors import ConfigurationError, NumericDivergenceError
from cnets.problems import Objective, named_objective
from cnets.pso import (
    PsoParams,
    build_pso_network,
    evaluate,
    global_best,
    move,
    neighborhood_best,
    refresh_neighborhoods,
    ring_distance,
)
from cnets.rng import RngStream


def sphere_swarm(particles=6, dimension=2, seed=1, **kwargs):
    objective = named_objective("sphere", dimension)
    params = PsoParams(particles=particles, **kwargs)
    return build_pso_network(objective, RngStream(seed), params), objective


class TestParams:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"inertia": float("nan")},
            {"cognitive": -0.1},
            {"social": -1.0},
            {"velocity_clamp": -0.5},
            {"particles": 1},
            {"topology": "star"},
            {"topology": "custom"},
            {"topology": "custom", "particles": 3, "neighborhoods": ((0, 1), (1,), (2, 0))},
            {"topology": "custom", "particles": 3, "neighborhoods": ((0, 1), (1, 2), (2, 5))},
            {"topology": "custom", "particles": 3, "neighborhoods": ((0, 1), (0, 2), (2, 0))},
            {"topology": "ring", "neighborhoods": ((0, 1), (0, 1))},
        ],
    )
    def test_bad_values_rejected(self, kwargs):
        with pytest.raises(ConfigurationError):
            PsoParams(**kwargs)

    def test_defaults_are_valid(self):
        PsoParams()


class TestRingDistance:
    def test_wraps_around(self):
        assert ring_distance(5, 2, 9 % 5) == 2
        assert ring_distance(5, 0, 4) == 1
        assert ring_distance(6, 0, 3) == 3

    def test_symmetric(self):
        assert ring_distance(7, 2, 5) == ring_distance(7, 5, 2)

    @given(
        st.integers(min_value=1, max_value=40),
        st.integers(min_value=0, max_value=39),
        st.integers(min_value=0, max_value=39),
    )
    def test_is_a_metric_on_the_ring(self, n, i, j):
        i, j = i % n, j % n
        d = ring_distance(n, i, j)
        assert 0 <= d <= n // 2
        assert (d == 0) == (i == j)
        assert d == ring_distance(n, j, i)


class TestTopologies:
    def test_ring_makes_one_edge_per_particle(self):
        net, _ = sphere_swarm(particles=5, topology="ring")
        assert len(net.edges) == 5
        assert sorted(net.edges[0].endpoints) == [0, 1, 4]

    def test_global_collapses_to_one_hyperedge(self):
        net, _ = sphere_swarm(particles=5, topology="global")
        assert len(net.edges) == 1
        assert net.edges[0].endpoints == tuple(range(5))
        assert set(net.arch.edge_of_particle.values()) == {0}

    def test_custom_neighborhoods_are_honored(self):
        net, _ = sphere_swarm(
            particles=4,
            topology="custom",
            neighborhoods=((0, 1), (0, 1), (2, 3), (2, 3)),
        )
        assert len(net.edges) == 2
        assert net.arch.edge_of_particle == {0: 0, 1: 0, 2: 1, 3: 1}


class TestEvaluation:
    def test_personal_bests_seeded_at_build(self):
        net, objective = sphere_swarm()
        for node in net.nodes:
            p = node.payload
            assert p.best_value == objective(p.position)
            assert np.array_equal(p.best_position, p.position)

    def test_personal_best_only_improves_strictly(self):
        net, objective = sphere_swarm(particles=3, dimension=1)
        p = net.nodes[0].payload
        p.best_value = 1.0
        p.best_position = np.array([1.0])
        p.position = np.array([-1.0])  # same value: no update
        evaluate(net, objective)
        assert p.best_position[0] == 1.0
        p.position = np.array([0.5])  # better: update
        evaluate(net, objective)
        assert p.best_value == 0.25
        assert p.best_position[0] == 0.5

    def test_non_finite_value_raises(self):
        spike = Objective(
            name="spike",
            dimension=1,
            lower=-1.0,
            upper=1.0,
            fn=lambda x: float("nan"),
        )
        net = build_pso_network(
            named_objective("sphere", 1), RngStream(1), PsoParams(particles=2)
        )
        with pytest.raises(NumericDivergenceError):
            evaluate(net, spike)

    def test_neighborhood_best_ties_to_lowest_id(self):
        net, _ = sphere_swarm(particles=3, dimension=1)
        for node in net.nodes:
            node.payload.best_value = 2.0
            node.payload.best_position = np.array([float(node.id)])
        position, value = neighborhood_best(net, [1, 2])
        assert value == 2.0
        assert position[0] == 1.0


class TestMove:
    def test_pure_inertia_drift(self):
        net, _ = sphere_swarm(particles=2, dimension=1, cognitive=0.0, social=0.0, inertia=1.0)
        p = net.nodes[0].payload
        p.position = np.array([1.0])
        p.velocity = np.array([0.25])
        refresh_neighborhoods(net)
        move(net, net.arch.params, RngStream(9))
        assert p.position[0] == 1.25
        assert p.velocity[0] == 0.25

    def test_attraction_points_toward_bests(self):
        net, _ = sphere_swarm(particles=2, dimension=1, inertia=0.0)
        p = net.nodes[0].payload
        p.position = np.array([3.0])
        p.velocity = np.array([0.0])
        p.best_position = np.array([0.0])
        p.best_value = 0.0
        refresh_neighborhoods(net)
        move(net, net.arch.params, RngStream(9))
        assert p.velocity[0] <= 0.0  # both pulls aim at the origin side

    def test_velocity_clamp_bounds_components(self):
        net, _ = sphere_swarm(particles=4, dimension=3, velocity_clamp=0.05)
        for _ in range(5):
            refresh_neighborhoods(net)
            move(net, net.arch.params, RngStream(3))
        for node in net.nodes:
            assert np.all(np.abs(node.payload.velocity) <= 0.05)

    def test_draw_order_is_cognitive_then_social_per_particle(self):
        net, _ = sphere_swarm(particles=2, dimension=2, inertia=0.0)
        for node in net.nodes:
            node.payload.position = np.array([1.0, 1.0])
            node.payload.velocity = np.array([0.0, 0.0])
            node.payload.best_position = np.array([0.0, 0.0])
            node.payload.best_value = 0.0
        refresh_neighborhoods(net)
        rng = RngStream(77)
        reference = []
        mirror = RngStream(77)
        for _ in range(2):
            r_cog = mirror.uniform(0.0, 1.0, size=2)
            r_soc = mirror.uniform(0.0, 1.0, size=2)
            reference.append(-(1.49 * r_cog + 1.49 * r_soc))
        move(net, net.arch.params, rng)
        for node, expected in zip(net.nodes, reference):
            assert node.payload.velocity == pytest.approx(expected)


class TestSwarmRuns:
    def test_global_best_is_non_increasing(self):
        net, objective = sphere_swarm(particles=8, dimension=3, seed=5)
        records = run(
            net,
            ScaleSchedule(fast_steps_per_slow=1, slow_steps=30),
            objective,
            RngStream(6),
        )
        values = [r.best_value for r in records]
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_sphere_swarm_converges_reasonably(self):
        net, objective = sphere_swarm(particles=12, dimension=2, seed=7)
        records = run(
            net,
            ScaleSchedule(fast_steps_per_slow=1, slow_steps=60),
            objective,
            RngStream(8),
        )
        assert records[-1].best_value < records[0].best_value * 0.05

    def test_readout_is_the_global_best_position(self):
        net, objective = sphere_swarm(particles=5, dimension=2, seed=9)
        records = run(
            net, ScaleSchedule(fast_steps_per_slow=1, slow_steps=5), objective, RngStream(10)
        )
        position, value = global_best(net)
        assert records[-1].network_output == pytest.approx(list(position))
        assert records[-1].best_value == value

    def test_run_is_seed_deterministic(self):
        def final(seed):
            net, objective = sphere_swarm(particles=6, dimension=2, seed=seed)
            records = run(
                net,
                ScaleSchedule(fast_steps_per_slow=1, slow_steps=20),
                objective,
                RngStream(seed + 1),
            )
            return records[-1].best_value

        assert final(3) == final(3)

    def test_problem_mismatch_rejected(self):
        net, _ = sphere_swarm()
        other = named_objective("rastrigin", 2)
        with pytest.raises(ConfigurationError):
            run(net, ScaleSchedule(fast_steps_per_slow=1, slow_steps=1), other, RngStream(0))
