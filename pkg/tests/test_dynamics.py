"""Kernel, simulation and stochastic-approximation identity tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vrrw.dynamics import (
    geometric_schedule,
    integrate_flow,
    occupation_from_counts,
    overlap,
    sa_residual,
    simulate,
    step,
    transition_kernel,
    vector_field,
    walk_rngs,
    weight,
    weight_bases,
)
from vrrw.errors import DomainError
from vrrw.graph_model import make_system, preset_complete, preset_cycle, preset_star


def random_interior(graph, rng):
    x = np.empty(graph.dim)
    for i, d_i in enumerate(graph.degrees):
        x[graph.block(i)] = rng.dirichlet(np.ones(d_i))
    return x


SYSTEMS = [
    preset_complete(2, 0.0, 2.0),
    preset_complete(3, 0.05, 1.2),
    preset_complete(3, 0.5, 2.0, alpha=2.0),
    preset_star(3, 0.2, 2.5),
    preset_cycle(4, 0.1, 3.0, alpha=0.5),
]


class TestKernel:
    def test_hand_computed_k2(self):
        # two walks on K_2, eps=0, eta=2, alpha=1, state x1=(0.4,0.6), x2=(0.3,0.7):
        # H_1^1 = 2 - 0.3 = 1.7, H_2^1 = 2 - 0.7 = 1.3
        # N^1 = 0.4*1.7 + 0.6*1.3 = 1.46; pi_1^1 = 0.68/1.46
        graph, params = preset_complete(2, 0.0, 2.0)
        x = np.array([0.4, 0.6, 0.3, 0.7])
        pi = transition_kernel(graph, params, x)
        assert pi[0] == pytest.approx(0.68 / 1.46, abs=1e-15)
        assert pi[1] == pytest.approx(0.78 / 1.46, abs=1e-15)

    def test_weight_matches_bases(self):
        graph, params = preset_complete(3, 0.3, 2.0, alpha=2.0)
        rng = np.random.default_rng(0)
        x = random_interior(graph, rng)
        bases = weight_bases(graph, params, x)
        for i in range(2):
            for v in (1, 2, 3):
                k = graph.slot(i, v)
                assert weight(graph, params, x, i, v) == pytest.approx(
                    bases[k] ** 2, rel=1e-14
                )

    @pytest.mark.parametrize("graph,params", SYSTEMS)
    def test_rows_normalize(self, graph, params):
        rng = np.random.default_rng(7)
        for _ in range(20):
            pi = transition_kernel(graph, params, random_interior(graph, rng))
            for i in range(graph.num_walks):
                assert np.sum(pi[graph.block(i)]) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("graph,params", SYSTEMS)
    def test_support_preserved(self, graph, params):
        # pi_v = 0 exactly where x_v = 0, positive elsewhere
        rng = np.random.default_rng(3)
        x = random_interior(graph, rng)
        k = graph.offsets[1] - 1
        x[k] = 0.0
        blk = graph.block(0)
        x[blk] /= x[blk].sum()
        pi = transition_kernel(graph, params, x)
        assert pi[k] == 0.0
        assert np.all(pi[x > 0] > 0)

    def test_vector_field_vanishes_at_uniform_k3(self):
        graph, params = preset_complete(3, 0.4, 2.0)
        f = vector_field(graph, params, graph.uniform_state())
        assert np.max(np.abs(f)) < 1e-15

    def test_overlap_hand_value(self):
        graph, _ = preset_complete(2, 0.0, 2.0)
        x = np.array([0.4, 0.6, 0.3, 0.7])
        assert overlap(graph, x) == pytest.approx(0.4 * 0.3 + 0.6 * 0.7)

    def test_overlap_zero_for_disjoint(self):
        graph, _ = preset_complete(3, 0.0, 2.0)
        x = np.array([1.0, 0.0, 0.0, 0.0, 0.5, 0.5])
        assert overlap(graph, x) == 0.0


class TestSchedules:
    def test_geometric_endpoints(self):
        sched = geometric_schedule(1000)
        assert sched[0] == 0
        assert sched[-1] == 1000
        assert np.all(np.diff(sched) > 0)

    def test_geometric_growth(self):
        sched = geometric_schedule(10**6, base=1.2)
        interior = sched[(sched > 100) & (sched < 10**5)]
        ratios = interior[1:] / interior[:-1]
        assert np.all(ratios <= 1.21)


class TestSimulate:
    def test_initial_state_uniform(self):
        graph, params = preset_complete(3, 0.0, 2.0)
        traj = simulate(graph, params, 10, seed=1, schedule=np.array([0, 10]))
        assert np.allclose(traj.states[0], 1.0 / 3.0)

    def test_occupation_accounting(self):
        # after n steps every walk has n visits beyond the prior
        graph, params = preset_complete(3, 0.0, 2.0)
        traj = simulate(graph, params, 500, seed=5, schedule=np.array([500]))
        for i in range(2):
            assert np.sum(traj.final_state[graph.block(i)]) == pytest.approx(1.0)

    def test_determinism(self):
        graph, params = preset_cycle(3, 0.1, 2.0)
        t1 = simulate(graph, params, 2000, seed=42)
        t2 = simulate(graph, params, 2000, seed=42)
        assert np.array_equal(t1.states, t2.states)

    def test_seed_sensitivity(self):
        graph, params = preset_complete(3, 0.0, 2.0)
        t1 = simulate(graph, params, 2000, seed=1, schedule=np.array([2000]))
        t2 = simulate(graph, params, 2000, seed=2, schedule=np.array([2000]))
        assert not np.array_equal(t1.states, t2.states)

    def test_replica_streams_differ(self):
        graph, params = preset_complete(3, 0.0, 2.0)
        t1 = simulate(graph, params, 2000, seed=1, replica=0, schedule=np.array([2000]))
        t2 = simulate(graph, params, 2000, seed=1, replica=1, schedule=np.array([2000]))
        assert not np.array_equal(t1.states, t2.states)

    def test_schedule_validation(self):
        graph, params = preset_complete(2, 0.0, 2.0)
        with pytest.raises(ValueError):
            simulate(graph, params, 10, seed=0, schedule=np.array([0, 20]))
        with pytest.raises(ValueError):
            simulate(graph, params, 0, seed=0)

    def test_segment_split_invariance(self):
        # recording more often must not change the realized path
        graph, params = preset_star(3, 0.2, 2.5)
        coarse = simulate(graph, params, 3000, seed=9, schedule=np.array([3000]))
        fine = simulate(graph, params, 3000, seed=9,
                        schedule=np.array([0, 7, 100, 1500, 3000]))
        assert np.array_equal(coarse.final_state, fine.final_state)

    def test_pure_python_step_bit_identical(self):
        graph, params = preset_cycle(3, 0.1, 2.0, alpha=2.0)
        n_steps = 300
        traj = simulate(graph, params, n_steps, seed=11, schedule=np.array([n_steps]))
        rngs = walk_rngs(11, 0, graph.num_walks)
        uniforms = np.array([r.random(n_steps) for r in rngs])
        counts = np.zeros(graph.dim, dtype=np.int64)
        for n in range(n_steps):
            step(graph, params, counts, n, uniforms[:, n])
        x = occupation_from_counts(graph, counts, n_steps)
        assert np.array_equal(x, traj.final_state)

    def test_domain_error_on_nonpositive_base(self):
        # force a negative weight base via a large positive-overlap state:
        # eta barely dominant and strong cross-coupling cannot go negative
        # under validation, so drive it with an adversarial manual state
        graph, params = preset_complete(2, 0.0, 1.0 + 1e-9)
        counts = np.zeros(graph.dim, dtype=np.int64)
        # both walks glued to vertex 1 pushes H toward eta - 1 ~ 1e-9 > 0,
        # so a legal system stays positive; check step() accepts it
        counts[graph.slot(0, 1)] = 50
        counts[graph.slot(1, 1)] = 50
        step(graph, params, counts, 50, [0.5, 0.5])
        # an illegal interaction matrix (bypassing validation) must raise
        object.__setattr__(params, "eta_flat", params.eta_flat - 1.0)
        with pytest.raises(DomainError):
            step(graph, params, counts, 50, [0.5, 0.5])


class TestSaIdentity:
    @pytest.mark.parametrize("graph,params", SYSTEMS)
    def test_every_step_satisfies_identity(self, graph, params):
        n_steps = 200
        traj = simulate(graph, params, n_steps, seed=3,
                        schedule=np.arange(n_steps + 1), record_choices=True)
        for n in range(n_steps):
            chosen = tuple(
                graph.slot_owner(int(traj.choices[i, n]))[1]
                for i in range(graph.num_walks)
            )
            res = sa_residual(graph, params, traj.states[n], traj.states[n + 1],
                              chosen, n)
            assert res <= 1e-12

    @given(st.integers(0, 10**6))
    @settings(max_examples=20, deadline=None)
    def test_identity_along_random_seeds(self, seed):
        graph, params = preset_complete(3, 0.1, 1.2)
        traj = simulate(graph, params, 50, seed=seed,
                        schedule=np.arange(51), record_choices=True)
        for n in range(50):
            chosen = tuple(
                graph.slot_owner(int(traj.choices[i, n]))[1]
                for i in range(graph.num_walks)
            )
            assert sa_residual(graph, params, traj.states[n],
                               traj.states[n + 1], chosen, n) <= 1e-12


class TestFlow:
    def test_flow_stays_on_simplices(self):
        graph, params = preset_complete(3, 0.05, 2.0)
        rng = np.random.default_rng(1)
        _, path = integrate_flow(graph, params, random_interior(graph, rng), 5.0)
        for x in path[:: len(path) // 20]:
            for i in range(2):
                assert np.sum(x[graph.block(i)]) == pytest.approx(1.0, abs=1e-9)
                assert np.min(x[graph.block(i)]) >= -1e-12

    def test_flow_converges_toward_fixed_point(self):
        graph, params = preset_complete(2, 0.0, 2.0)
        x0 = np.array([0.8, 0.2, 0.3, 0.7])
        _, path = integrate_flow(graph, params, x0, 40.0)
        f = vector_field(graph, params, path[-1])
        assert np.max(np.abs(f)) < 1e-4
