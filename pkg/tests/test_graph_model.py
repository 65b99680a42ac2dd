"""Construction, validation and preset tests for the graph/parameter layer."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vrrw.errors import (
    DominanceViolation,
    DuplicateVertexInSet,
    EmptyVertexSet,
    InvalidSize,
    SymmetryViolation,
    ValidationError,
)
from vrrw.graph_model import (
    build_system,
    make_system,
    preset_complete,
    preset_cycle,
    preset_star,
    preset_star_preferences,
)


def competitive_rho(graph, epsilon):
    return {
        (v, i, j): (-epsilon if i == j else -1.0)
        for v, walks in graph.shared_index.items()
        for i in walks
        for j in walks
    }


class TestGraphSystem:
    def test_flat_layout_and_slots(self):
        graph, _ = preset_complete(3, 0.0, 2.0)
        assert graph.dim == 6
        assert graph.degrees == (3, 3)
        assert graph.offsets == (0, 3, 6)
        assert graph.slot(0, 1) == 0
        assert graph.slot(1, 1) == 3
        assert graph.slot(1, 3) == 5
        for k in range(graph.dim):
            i, v = graph.slot_owner(k)
            assert graph.slot(i, v) == k

    def test_vertices_sorted_within_walk(self):
        graph, _ = make_system([(3, 1, 2), (2, 1)], 1.0,
                               {(0, 1): 2.0, (0, 2): 2.0, (0, 3): 2.0,
                                (1, 1): 2.0, (1, 2): 2.0}, {})
        assert graph.vertex_sets == ((1, 2, 3), (1, 2))

    def test_shared_index(self):
        graph, _ = preset_star(3, 0.0, 5.0)
        assert graph.shared_index[1] == (0, 1, 2)
        assert graph.shared_index[2] == (0,)

    def test_uniform_state(self):
        graph, _ = preset_star(3, 0.0, 5.0)
        x = graph.uniform_state()
        assert np.allclose(x, 0.5)
        graph, _ = preset_complete(4, 0.0, 2.0)
        assert np.allclose(graph.uniform_state(), 0.25)

    def test_shared_slot_pairs_complete(self):
        graph, _ = preset_complete(3, 0.0, 2.0)
        left, right = graph.shared_slot_pairs()
        assert list(left) == [0, 1, 2]
        assert list(right) == [3, 4, 5]

    def test_empty_vertex_set_rejected(self):
        with pytest.raises(EmptyVertexSet):
            make_system([(1, 2), ()], 1.0, {(0, 1): 1.0, (0, 2): 1.0}, {})

    def test_duplicate_vertex_rejected(self):
        with pytest.raises(DuplicateVertexInSet):
            make_system([(1, 1)], 1.0, {(0, 1): 1.0}, {})


class TestParameterValidation:
    def test_symmetry_enforced(self):
        graph_sets = [(1, 2), (1, 2)]
        eta = {(i, v): 3.0 for i in range(2) for v in (1, 2)}
        rho = {(1, 0, 1): -1.0, (1, 1, 0): -0.5}
        with pytest.raises(SymmetryViolation):
            make_system(graph_sets, 1.0, eta, rho)

    def test_one_triangle_suffices(self):
        graph_sets = [(1, 2), (1, 2)]
        eta = {(i, v): 3.0 for i in range(2) for v in (1, 2)}
        rho = {(1, 0, 1): -1.0, (2, 0, 1): -1.0}
        _, params = make_system(graph_sets, 1.0, eta, rho)
        assert params.get_rho(1, 1, 0) == -1.0
        assert params.get_rho(2, 1, 0) == -1.0

    def test_strict_dominance(self):
        # eta must strictly exceed the total negative coupling mass
        with pytest.raises(DominanceViolation) as err:
            preset_complete(3, 0.0, 1.0)  # bound is exactly 1.0
        assert err.value.bound == pytest.approx(1.0)
        preset_complete(3, 0.0, 1.0 + 1e-9)  # strictly above passes

    def test_dominance_counts_only_negative_rho(self):
        graph_sets = [(1, 2), (1, 2)]
        eta = {(i, v): 0.5 for i in range(2) for v in (1, 2)}
        rho = {(v, i, j): 2.0 for v in (1, 2) for i in range(2) for j in range(2)}
        _, params = make_system(graph_sets, 1.0, eta, rho)  # positive rho: no bound
        assert params.get_rho(1, 0, 0) == 2.0

    def test_alpha_positive(self):
        with pytest.raises(ValidationError):
            preset_complete(3, 0.0, 2.0, alpha=0.0)

    def test_eta_positive(self):
        with pytest.raises(ValidationError):
            make_system([(1,)], 1.0, {(0, 1): 0.0}, {})

    def test_interaction_matrix_entries(self):
        graph, params = preset_complete(3, 0.25, 2.0)
        R = params.interaction
        for v in (1, 2, 3):
            assert R[graph.slot(0, v), graph.slot(0, v)] == -0.25
            assert R[graph.slot(0, v), graph.slot(1, v)] == -1.0
            assert R[graph.slot(1, v), graph.slot(0, v)] == -1.0
        # no coupling across distinct vertices
        assert R[graph.slot(0, 1), graph.slot(1, 2)] == 0.0

    def test_interaction_symmetric(self):
        _, params = preset_cycle(5, 0.3, 3.0)
        assert np.array_equal(params.interaction, params.interaction.T)


class TestBuildSystem:
    CONFIG = {
        "walks": [{"vertices": [1, 2, 3]}, {"vertices": [1, 2, 3]}],
        "alpha": 1.0,
        "eta": {"default": 2.0},
        "rho": {"pairwise_default": -1.0, "self_default": 0.0},
    }

    def test_matches_preset(self):
        graph, params = build_system(self.CONFIG)
        g2, p2 = preset_complete(3, 0.0, 2.0)
        assert graph.vertex_sets == g2.vertex_sets
        assert np.array_equal(params.interaction, p2.interaction)
        assert np.array_equal(params.eta_flat, p2.eta_flat)

    def test_eta_override_is_one_based(self):
        config = dict(self.CONFIG)
        config["eta"] = {"default": 2.0,
                        "overrides": [{"walk": 1, "vertex": 2, "value": 4.0}]}
        graph, params = build_system(config)
        assert params.eta[(0, 2)] == 4.0
        assert params.eta[(1, 2)] == 2.0

    def test_rho_override_symmetrized(self):
        config = dict(self.CONFIG)
        config["rho"] = {
            "pairwise_default": -1.0,
            "overrides": [{"vertex": 3, "walk_i": 1, "walk_j": 2, "value": -0.5}],
        }
        _, params = build_system(config)
        assert params.get_rho(3, 0, 1) == -0.5
        assert params.get_rho(3, 1, 0) == -0.5
        assert params.get_rho(1, 0, 1) == -1.0

    def test_missing_keys(self):
        with pytest.raises(ValidationError):
            build_system({"alpha": 1.0})
        with pytest.raises(ValidationError):
            build_system({"walks": [{"vertices": [1]}], "alpha": 1.0})


class TestPresets:
    def test_complete_shape(self):
        graph, _ = preset_complete(4, 0.1, 2.0)
        assert graph.vertex_sets == ((1, 2, 3, 4), (1, 2, 3, 4))
        with pytest.raises(InvalidSize):
            preset_complete(1, 0.0, 2.0)

    def test_star_shape(self):
        graph, _ = preset_star(4, 0.1, 5.0)
        assert graph.vertex_sets == ((1, 2), (1, 3), (1, 4), (1, 5))
        with pytest.raises(InvalidSize):
            preset_star(1, 0.0, 5.0)

    def test_star_center_dominance(self):
        # center is shared by all m walks: eta must exceed m-1+epsilon there
        with pytest.raises(DominanceViolation):
            preset_star(3, 0.5, 2.0)
        preset_star(3, 0.5, 2.6)

    def test_star_preferences_eta_split(self):
        graph, params = preset_star_preferences(1.5, 0.6)
        assert params.eta[(0, 1)] == pytest.approx(2.1)
        assert params.eta[(1, 1)] == pytest.approx(2.1)
        assert params.eta[(0, 2)] == pytest.approx(0.6)
        assert params.eta[(1, 3)] == pytest.approx(0.6)
        assert params.get_rho(1, 0, 0) == 0.0

    def test_cycle_shape(self):
        graph, _ = preset_cycle(4, 0.0, 3.0)
        assert graph.vertex_sets == ((1, 2), (2, 3), (3, 4), (1, 4))
        # every cycle vertex is shared by exactly two walks
        assert all(len(w) == 2 for w in graph.shared_index.values())
        with pytest.raises(InvalidSize):
            preset_cycle(2, 0.0, 3.0)

    @given(st.integers(2, 6), st.floats(0.0, 0.9))
    @settings(max_examples=25, deadline=None)
    def test_complete_preset_always_valid(self, kappa, epsilon):
        eta = 1.0 + epsilon + 0.01
        graph, params = preset_complete(kappa, epsilon, eta)
        assert graph.dim == 2 * kappa
        assert params.alpha == 1.0
