"""Exact enumeration of the kernel's fixed points.

Every fixed point with support profile S solves a linear system: balance of
importances across each walk's occupied vertices, per-walk normalization,
and zeros off the support.  Iterating over all support profiles and keeping
the positive solutions yields the full fixed-point set, as isolated points
plus affine continua.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .dynamics import transition_kernel
from .errors import MixedSigns, NotApplicable, SizeGuard
from .graph_model import GraphSystem, ParameterSet

TOL_POS = 1e-9
DEDUP_DECIMALS = 9
RANK_RTOL = 1e-10
COND_LIMIT = 1e12
SUPPORT_CAP = 24


@dataclass
class LinearSystem:
    """The d-row linear system pinning down fixed points on a support."""

    support: tuple[tuple[int, ...], ...]
    matrix: np.ndarray
    rhs: np.ndarray


@dataclass
class FixedPointComponent:
    """One connected component of the fixed-point set."""

    support: tuple[tuple[int, ...], ...]
    kind: str  # "isolated" | "continuum"
    point: np.ndarray
    basis: np.ndarray | None = None  # (d, nullity) for continua
    det: float = 0.0
    residual: float = 0.0
    flags: list[str] = field(default_factory=list)

    @property
    def is_isolated(self) -> bool:
        return self.kind == "isolated"


def enumerate_supports(graph: GraphSystem, cap: int = SUPPORT_CAP):
    """All support profiles with nonempty per-walk components,
    lexicographic in (walk order, subset bitmask)."""
    if graph.dim > cap:
        raise SizeGuard(
            f"support enumeration over {graph.dim} coordinates exceeds cap {cap}"
        )
    per_walk = []
    for vs in graph.vertex_sets:
        subsets = []
        for mask in range(1, 1 << len(vs)):
            subsets.append(tuple(v for a, v in enumerate(vs) if mask >> a & 1))
        per_walk.append(subsets)
    yield from product(*per_walk)


def build_linear_system(graph: GraphSystem, params: ParameterSet, support) -> LinearSystem:
    """Assemble the balance/normalization/zero rows for one support."""
    d = graph.dim
    rows, rhs = [], []
    for i, s_i in enumerate(support):
        s_i = tuple(sorted(s_i))
        for v, w in zip(s_i, s_i[1:]):
            row = np.zeros(d)
            for j in graph.shared_index[v]:
                row[graph.slot(j, v)] += params.get_rho(v, i, j)
            for j in graph.shared_index[w]:
                row[graph.slot(j, w)] -= params.get_rho(w, i, j)
            rows.append(row)
            rhs.append(params.eta[(i, w)] - params.eta[(i, v)])
        row = np.zeros(d)
        for v in s_i:
            row[graph.slot(i, v)] = 1.0
        rows.append(row)
        rhs.append(1.0)
        for u in graph.vertex_sets[i]:
            if u not in s_i:
                row = np.zeros(d)
                row[graph.slot(i, u)] = 1.0
                rows.append(row)
                rhs.append(0.0)
    return LinearSystem(
        support=tuple(tuple(sorted(s)) for s in support),
        matrix=np.array(rows),
        rhs=np.array(rhs),
    )


def _zero_off_support(graph: GraphSystem, support, x: np.ndarray) -> np.ndarray:
    y = x.copy()
    for i, vs in enumerate(graph.vertex_sets):
        for v in vs:
            if v not in support[i]:
                y[graph.slot(i, v)] = 0.0
    return y


def _support_slots(graph: GraphSystem, support) -> np.ndarray:
    return np.array(
        [graph.slot(i, v) for i, s_i in enumerate(support) for v in s_i],
        dtype=np.int64,
    )


def verify_fixed_point(graph: GraphSystem, params: ParameterSet, x: np.ndarray, tol: float = 1e-10) -> bool:
    """True when the kernel moves x by at most tol in max-norm."""
    return bool(np.max(np.abs(transition_kernel(graph, params, x) - x)) <= tol)


def _kernel_residual(graph, params, x) -> float:
    return float(np.max(np.abs(transition_kernel(graph, params, x) - x)))


def solve_support(graph: GraphSystem, params: ParameterSet, support) -> FixedPointComponent | None:
    """Solve one support's linear system and keep positive solutions.

    Full rank yields at most one isolated point; rank deficiency yields an
    affine set, returned as a continuum when it meets the open positivity
    region (searched over the null directions for nullity <= 2).
    """
    system = build_linear_system(graph, params, support)
    a, b = system.matrix, system.rhs
    u_svd, sing, vt = np.linalg.svd(a)
    smax = sing[0]
    rank = int(np.sum(sing > RANK_RTOL * smax))
    det = float(np.linalg.det(a))
    flags = []
    if rank == a.shape[0] and smax / sing[-1] > COND_LIMIT:
        flags.append("ill_conditioned")
    slots = _support_slots(graph, system.support)

    if rank == a.shape[0]:
        x = np.linalg.solve(a, b)
        x = _zero_off_support(graph, system.support, x)
        if np.all(x[slots] > TOL_POS):
            return FixedPointComponent(
                support=system.support,
                kind="isolated",
                point=x,
                det=det,
                residual=_kernel_residual(graph, params, x),
                flags=flags,
            )
        return None

    # rank-deficient: consistency, particular solution, null directions
    rank_aug = int(
        np.sum(np.linalg.svd(np.column_stack([a, b]), compute_uv=False) > RANK_RTOL * smax)
    )
    if rank_aug > rank:
        return None
    x0 = np.linalg.lstsq(a, b, rcond=None)[0]
    basis = vt[rank:].T  # (d, nullity)
    nullity = basis.shape[1]
    if nullity > 2:
        x0 = _zero_off_support(graph, system.support, x0)
        return FixedPointComponent(
            support=system.support,
            kind="continuum",
            point=x0,
            basis=basis,
            det=det,
            residual=_kernel_residual(graph, params, np.clip(x0, 0, None)),
            flags=flags + ["unclassified_continuum"],
        )
    # maximize the minimum support coordinate over the null directions
    grid = np.arange(-2.0, 2.0 + 1e-12, 0.01)
    if nullity == 1:
        cand = x0[None, :] + grid[:, None] * basis[:, 0][None, :]
    else:
        t1, t2 = np.meshgrid(grid, grid, indexing="ij")
        cand = (
            x0[None, :]
            + t1.ravel()[:, None] * basis[:, 0][None, :]
            + t2.ravel()[:, None] * basis[:, 1][None, :]
        )
    scores = cand[:, slots].min(axis=1)
    best = int(np.argmax(scores))
    if scores[best] <= TOL_POS:
        return None
    x_best = _zero_off_support(graph, system.support, cand[best])
    return FixedPointComponent(
        support=system.support,
        kind="continuum",
        point=x_best,
        basis=basis,
        det=det,
        residual=_kernel_residual(graph, params, x_best),
        flags=flags,
    )


def project_to_component(graph: GraphSystem, comp: FixedPointComponent, x: np.ndarray) -> np.ndarray:
    """Closest representative of a component: the point itself for isolated
    components, else the affine projection clipped back to positivity."""
    if comp.is_isolated or comp.basis is None:
        return comp.point
    t = np.linalg.lstsq(comp.basis, x - comp.point, rcond=None)[0]
    proj = comp.point + comp.basis @ t
    proj = np.clip(proj, 0.0, None)
    for i in range(graph.num_walks):
        blk = graph.block(i)
        s = proj[blk].sum()
        if s > 0:
            proj[blk] /= s
    return proj


def component_distance(graph: GraphSystem, comp: FixedPointComponent, x: np.ndarray) -> float:
    """Max-norm distance from x to a component."""
    return float(np.max(np.abs(x - project_to_component(graph, comp, x))))


def _actual_support(graph: GraphSystem, x: np.ndarray):
    return tuple(
        tuple(v for v in graph.vertex_sets[i] if x[graph.slot(i, v)] > TOL_POS)
        for i in range(graph.num_walks)
    )


def fixed_point_set(graph: GraphSystem, params: ParameterSet, cap: int = SUPPORT_CAP) -> list[FixedPointComponent]:
    """All fixed-point components, deduplicated across supports."""
    isolated: dict[tuple, FixedPointComponent] = {}
    continua: list[FixedPointComponent] = []
    seen_continua = set()
    for support in enumerate_supports(graph, cap=cap):
        comp = solve_support(graph, params, support)
        if comp is None:
            continue
        if comp.is_isolated:
            comp.support = _actual_support(graph, comp.point)
            key = tuple(np.round(comp.point, DEDUP_DECIMALS))
            isolated.setdefault(key, comp)
        else:
            key = (comp.support, tuple(np.round(comp.basis, 6).ravel()))
            if key not in seen_continua:
                seen_continua.add(key)
                continua.append(comp)
    # isolated points sitting inside a continuum belong to that component
    points = [
        c for c in isolated.values()
        if all(component_distance(graph, cont, c.point) > 1e-9 for cont in continua)
    ]
    return points + continua


@dataclass
class GenericityReport:
    """Support-by-support regularity of the fixed-point linear systems."""

    degenerate: list[tuple]
    details: dict[tuple, tuple[float, float]]  # support -> (det, sigma_ratio)

    @property
    def all_regular(self) -> bool:
        return not self.degenerate


def genericity_check(graph: GraphSystem, params: ParameterSet, cap: int = SUPPORT_CAP, ratio_tol: float = 1e-10) -> GenericityReport:
    """Flag supports whose linear system is singular (smallest-to-largest
    singular value ratio below ratio_tol).  An empty list certifies a
    finite fixed-point set."""
    degenerate, details = [], {}
    for support in enumerate_supports(graph, cap=cap):
        system = build_linear_system(graph, params, support)
        sing = np.linalg.svd(system.matrix, compute_uv=False)
        ratio = float(sing[-1] / sing[0])
        det = float(np.linalg.det(system.matrix))
        details[system.support] = (det, ratio)
        if ratio < ratio_tol:
            degenerate.append(system.support)
    return GenericityReport(degenerate=degenerate, details=details)


UNCONSTRAINED = "unconstrained"


def disjoint_support_closed_form(graph: GraphSystem, params: ParameterSet, support):
    """Closed-form fixed point for pairwise-disjoint supports.

    With all self-couplings zero on a walk's support the solution is
    unconstrained there (marker returned); with one strict shared sign the
    point is proportional to the reciprocals of the self-couplings.
    Preconditions: supports pairwise disjoint, importance constant per walk
    on its support.
    """
    vertex_lists = [set(s) for s in support]
    for i in range(len(vertex_lists)):
        for j in range(i + 1, len(vertex_lists)):
            if vertex_lists[i] & vertex_lists[j]:
                raise ValueError("supports are not pairwise disjoint")
    for i, s_i in enumerate(support):
        etas = {params.eta[(i, v)] for v in s_i}
        if len(etas) > 1:
            raise ValueError(f"eta not constant on the support of walk {i + 1}")
    x = np.zeros(graph.dim)
    for i, s_i in enumerate(support):
        selfs = [params.get_rho(v, i, i) for v in s_i]
        if all(r == 0 for r in selfs):
            return UNCONSTRAINED
        if all(r > 0 for r in selfs) or all(r < 0 for r in selfs):
            inv = np.array([1.0 / r for r in selfs])
            masses = inv / inv.sum()
            for v, mass in zip(s_i, masses):
                x[graph.slot(i, v)] = mass
        else:
            raise MixedSigns(
                f"self-couplings on walk {i + 1} support mix signs: {selfs}"
            )
    return x


def _varying_walks(graph: GraphSystem, comp: FixedPointComponent) -> set[int]:
    """Walks whose coordinates actually move along the component."""
    if comp.basis is None:
        return set()
    out = set()
    for i in range(graph.num_walks):
        if np.abs(comp.basis[graph.block(i)]).max() > 1e-12:
            out.add(i)
    return out


def accumulation_condition_check(graph: GraphSystem, params: ParameterSet, components) -> tuple[bool, dict]:
    """Certify that the walk's accumulation points lie in the fixed-point
    set despite continuum components.

    Requires zero self-couplings and one common importance value
    (NotApplicable otherwise).  For each continuum support, searches for
    two walk-index sets covering the varying walks whose supports are
    internally disjoint with equal disjoint unions; a single varying walk
    passes outright.
    """
    if any(
        params.get_rho(v, i, i) != 0.0
        for v, walks in graph.shared_index.items()
        for i in walks
    ):
        raise NotApplicable("self-couplings must vanish")
    if len(set(params.eta.values())) > 1:
        raise NotApplicable("importance values must all be equal")
    witnesses: dict[tuple, dict] = {}
    ok = True
    for comp in components:
        if comp.is_isolated:
            continue
        j_set = sorted(_varying_walks(graph, comp))
        if not j_set:
            continue
        if len(j_set) == 1:
            witnesses[comp.support] = {"clause": "single_varying_walk"}
            continue
        found = None
        n = len(j_set)
        for mask_a in range(1, 1 << n):
            for mask_b in range(1, 1 << n):
                if (mask_a | mask_b) != (1 << n) - 1:
                    continue
                ja = [j_set[k] for k in range(n) if mask_a >> k & 1]
                jb = [j_set[k] for k in range(n) if mask_b >> k & 1]
                ua: set[int] = set()
                ub: set[int] = set()
                good = True
                for i in ja:
                    s = set(comp.support[i])
                    if ua & s:
                        good = False
                        break
                    ua |= s
                if good:
                    for i in jb:
                        s = set(comp.support[i])
                        if ub & s:
                            good = False
                            break
                        ub |= s
                if good and ua == ub:
                    found = {"J_a": ja, "J_b": jb}
                    break
            if found:
                break
        if found is None:
            ok = False
            witnesses[comp.support] = {"clause": "none"}
        else:
            witnesses[comp.support] = found
    return ok, witnesses
