"""Graph systems of interacting walks on complete sub-graphs.

A system is a finite family of walks, walk ``i`` confined to a complete
sub-graph on the vertex set ``V^i``.  Vertices are integer ids; the global
vertex set is the union of the per-walk sets.  Model parameters are the
exponent ``alpha``, the per-(walk, vertex) preferences ``eta`` and the
per-vertex interaction coefficients ``rho`` between the walks sharing that
vertex.

Walk indices are 0-based throughout the Python API; JSON configs use
1-based walk numbers (see :func:`build_system`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from .errors import (
    DominanceViolation,
    DuplicateVertexInSet,
    EmptyVertexSet,
    InvalidSize,
    SymmetryViolation,
    ValidationError,
)


@dataclass(frozen=True)
class GraphSystem:
    """The walks' vertex sets and the derived indexing structure.

    Coordinates of the joint state are laid out walk-by-walk, vertices in
    ascending id order within each walk.  ``slot(i, v)`` maps a (walk,
    vertex) pair to its position in that flat layout.
    """

    vertex_sets: tuple[tuple[int, ...], ...]
    shared_index: dict[int, tuple[int, ...]] = field(compare=False)
    degrees: tuple[int, ...] = field(compare=False)
    dim: int = field(compare=False, default=0)
    offsets: tuple[int, ...] = field(compare=False, default=())
    _slots: dict[tuple[int, int], int] = field(compare=False, default_factory=dict)

    @property
    def num_walks(self) -> int:
        return len(self.vertex_sets)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.shared_index))

    def slot(self, walk: int, vertex: int) -> int:
        return self._slots[(walk, vertex)]

    def block(self, walk: int) -> slice:
        return slice(self.offsets[walk], self.offsets[walk + 1])

    def slot_owner(self, k: int) -> tuple[int, int]:
        """Inverse of :meth:`slot`: global index -> (walk, vertex)."""
        for i in range(self.num_walks):
            if k < self.offsets[i + 1]:
                return i, self.vertex_sets[i][k - self.offsets[i]]
        raise IndexError(k)

    def uniform_state(self) -> np.ndarray:
        """The mandated initial occupation: 1/d^i on every vertex of walk i."""
        x = np.empty(self.dim)
        for i, d_i in enumerate(self.degrees):
            x[self.block(i)] = 1.0 / d_i
        return x

    def shared_slot_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """Slot index pairs (a, b) with a in walk i, b in walk j, i < j,
        both owning the same vertex.  Used by the overlap sum."""
        left, right = [], []
        for v, walks in self.shared_index.items():
            for i, j in combinations_with_replacement(walks, 2):
                if i < j:
                    left.append(self.slot(i, v))
                    right.append(self.slot(j, v))
        order = np.lexsort((right, left)) if left else []
        return (
            np.asarray(left, dtype=np.int64)[order],
            np.asarray(right, dtype=np.int64)[order],
        )


def _make_graph(vertex_sets) -> GraphSystem:
    sets = []
    for i, vs in enumerate(vertex_sets):
        vs = list(vs)
        if not vs:
            raise EmptyVertexSet(f"walk {i + 1} has an empty vertex set")
        if len(set(vs)) != len(vs):
            raise DuplicateVertexInSet(f"walk {i + 1} repeats a vertex id")
        sets.append(tuple(sorted(vs)))
    shared: dict[int, list[int]] = {}
    for i, vs in enumerate(sets):
        for v in vs:
            shared.setdefault(v, []).append(i)
    degrees = tuple(len(vs) for vs in sets)
    offsets = tuple(np.concatenate(([0], np.cumsum(degrees))).tolist())
    slots = {
        (i, v): offsets[i] + a for i, vs in enumerate(sets) for a, v in enumerate(vs)
    }
    return GraphSystem(
        vertex_sets=tuple(sets),
        shared_index={v: tuple(w) for v, w in shared.items()},
        degrees=degrees,
        dim=offsets[-1],
        offsets=offsets,
        _slots=slots,
    )


@dataclass(frozen=True)
class ParameterSet:
    """Validated model parameters for a given :class:`GraphSystem`.

    ``eta_flat`` and ``interaction`` are the flat-layout views consumed by
    the dynamics: the weight bases at state ``x`` are
    ``eta_flat + interaction @ x``.
    """

    alpha: float
    eta: dict[tuple[int, int], float]
    rho: dict[tuple[int, int, int], float]
    eta_flat: np.ndarray = field(compare=False, repr=False, default=None)
    interaction: np.ndarray = field(compare=False, repr=False, default=None)

    def get_rho(self, vertex: int, i: int, j: int) -> float:
        return self.rho.get((vertex, i, j), self.rho.get((vertex, j, i), 0.0))


def _validate_parameters(graph: GraphSystem, alpha, eta, rho) -> ParameterSet:
    if not alpha > 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")
    full_rho: dict[tuple[int, int, int], float] = {}
    for v, walks in graph.shared_index.items():
        for i in walks:
            for j in walks:
                a = rho.get((v, i, j))
                b = rho.get((v, j, i))
                if a is not None and b is not None and a != b:
                    raise SymmetryViolation(
                        f"rho[vertex {v}, walks {i + 1},{j + 1}] = {a} but the "
                        f"transposed entry is {b}"
                    )
                val = a if a is not None else b
                full_rho[(v, i, j)] = 0.0 if val is None else float(val)
    full_eta: dict[tuple[int, int], float] = {}
    for i, vs in enumerate(graph.vertex_sets):
        for v in vs:
            e = float(eta[(i, v)])
            if not e > 0:
                raise ValidationError(
                    f"eta[walk {i + 1}, vertex {v}] must be positive, got {e}"
                )
            bound = sum(
                -full_rho[(v, i, j)]
                for j in graph.shared_index[v]
                if full_rho[(v, i, j)] < 0
            )
            if not e > bound:
                raise DominanceViolation(i, v, e, bound)
            full_eta[(i, v)] = e
    eta_flat = np.empty(graph.dim)
    interaction = np.zeros((graph.dim, graph.dim))
    for (i, v), e in full_eta.items():
        eta_flat[graph.slot(i, v)] = e
    for (v, i, j), r in full_rho.items():
        interaction[graph.slot(i, v), graph.slot(j, v)] = r
    return ParameterSet(
        alpha=float(alpha),
        eta=full_eta,
        rho=full_rho,
        eta_flat=eta_flat,
        interaction=interaction,
    )


def make_system(vertex_sets, alpha, eta, rho) -> tuple[GraphSystem, ParameterSet]:
    """Low-level constructor from explicit parameter dictionaries.

    ``eta`` maps (walk, vertex) -> value; ``rho`` maps (vertex, i, j) ->
    value (either triangle suffices, symmetry is enforced; missing entries
    default to 0).
    """
    graph = _make_graph(vertex_sets)
    return graph, _validate_parameters(graph, alpha, eta, rho)


def build_system(config: dict) -> tuple[GraphSystem, ParameterSet]:
    """Build and validate a system from the JSON-compatible config schema.

    Schema (walk numbers 1-based)::

        {"walks": [{"vertices": [1, 2]}, ...],
         "alpha": 1.0,
         "eta": {"default": 2.0,
                 "overrides": [{"walk": 1, "vertex": 1, "value": 3.0}]},
         "rho": {"pairwise_default": -1.0, "self_default": 0.0,
                 "overrides": [{"vertex": 1, "walk_i": 1, "walk_j": 2,
                                "value": -0.5}]}}
    """
    try:
        walks = config["walks"]
        alpha = config["alpha"]
        eta_cfg = config.get("eta", {})
        rho_cfg = config.get("rho", {})
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed config: {exc}") from exc
    graph = _make_graph([w["vertices"] for w in walks])

    eta_default = eta_cfg.get("default")
    eta = {}
    for i, vs in enumerate(graph.vertex_sets):
        for v in vs:
            if eta_default is None:
                raise ValidationError("eta.default is required")
            eta[(i, v)] = eta_default
    for ov in eta_cfg.get("overrides", []):
        eta[(ov["walk"] - 1, ov["vertex"])] = ov["value"]

    pair_default = rho_cfg.get("pairwise_default", 0.0)
    self_default = rho_cfg.get("self_default", 0.0)
    rho = {}
    for v, shared in graph.shared_index.items():
        for i in shared:
            for j in shared:
                rho[(v, i, j)] = self_default if i == j else pair_default
    for ov in rho_cfg.get("overrides", []):
        i, j = ov["walk_i"] - 1, ov["walk_j"] - 1
        rho[(ov["vertex"], i, j)] = ov["value"]
        rho[(ov["vertex"], j, i)] = ov["value"]

    return graph, _validate_parameters(graph, alpha, eta, rho)


def _competitive_rho(graph: GraphSystem, epsilon: float):
    rho = {}
    for v, shared in graph.shared_index.items():
        for i in shared:
            for j in shared:
                rho[(v, i, j)] = -float(epsilon) if i == j else -1.0
    return rho


def _constant_eta(graph: GraphSystem, eta: float, overrides=None):
    table = {(i, v): float(eta) for i, vs in enumerate(graph.vertex_sets) for v in vs}
    if overrides:
        table.update({k: float(val) for k, val in overrides.items()})
    return table


def preset_complete(kappa: int, epsilon: float, eta: float, alpha: float = 1.0):
    """Two competing walks sharing all vertices of the complete graph K_kappa."""
    if kappa < 2:
        raise InvalidSize(f"complete preset needs kappa >= 2, got {kappa}")
    graph = _make_graph([range(1, kappa + 1)] * 2)
    return graph, _validate_parameters(
        graph, alpha, _constant_eta(graph, eta), _competitive_rho(graph, epsilon)
    )


def preset_star(
    m: int, epsilon: float, eta: float, alpha: float = 1.0, eta_overrides=None
):
    """m competing walks on the edges of the star K_{1,m}; center vertex is 1.

    ``eta_overrides`` maps (walk, vertex) -> value, e.g. to favour the
    center vertex over the leaves.
    """
    if m < 2:
        raise InvalidSize(f"star preset needs m >= 2, got {m}")
    graph = _make_graph([(1, i + 2) for i in range(m)])
    return graph, _validate_parameters(
        graph,
        alpha,
        _constant_eta(graph, eta, eta_overrides),
        _competitive_rho(graph, epsilon),
    )


def preset_star_preferences(eta_center: float, eta_base: float, alpha: float = 1.0):
    """Two-walk star whose center carries importance eta_base + eta_center
    against eta_base at the leaves (epsilon = 0)."""
    overrides = {(i, 1): eta_base + eta_center for i in range(2)}
    return preset_star(2, 0.0, eta_base, alpha, eta_overrides=overrides)


def preset_cycle(m: int, epsilon: float, eta: float, alpha: float = 1.0):
    """m competing walks, walk i on the edge {i, i+1} of the cycle C_m."""
    if m < 3:
        raise InvalidSize(f"cycle preset needs m >= 3, got {m}")
    sets = [(i, i + 1) for i in range(1, m)] + [(m, 1)]
    graph = _make_graph(sets)
    return graph, _validate_parameters(
        graph, alpha, _constant_eta(graph, eta), _competitive_rho(graph, epsilon)
    )
