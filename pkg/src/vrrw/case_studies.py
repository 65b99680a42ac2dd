"""Closed-form limit predictions for the three benchmark families.

Complete graphs (two competing walks), stars (m walks sharing the center)
and cycles (one walk per edge) admit explicit descriptions of the possible
long-run occupations.  This module enumerates those predictions and
matches simulation endpoints against them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .dynamics import Trajectory, overlap
from .errors import RegimeBoundary
from .fixed_points import FixedPointComponent, component_distance
from .graph_model import (
    GraphSystem,
    preset_complete,
    preset_cycle,
    preset_star,
    preset_star_preferences,
)


@dataclass
class PredictedLimitSet:
    """Explicit limit points and/or set descriptions for one family."""

    family: str  # complete | star | star_pref | cycle
    parameters: dict
    points: list[np.ndarray]
    descriptions: list[str] = field(default_factory=list)


def complete_overlap_deltas(epsilon: float, u: int, u1: int, u2: int):
    """Masses (delta^i on shared vertices, deltabar^i on private ones) for a
    two-walk overlap shape on a complete graph, or None when the shape's
    positivity conditions fail at this epsilon."""
    s1, s2 = u + u1, u + u2
    out = []
    for u_i, u_j, s_i, s_j in ((u1, u2, s1, s2), (u2, u1, s2, s1)):
        if u_i - epsilon * s_j <= 0 or u_i * u_j - epsilon**2 * s_i * s_j <= 0:
            return None
        delta = epsilon * (epsilon * s_j - u_i) / (epsilon**2 * s_i * s_j - u_i * u_j)
        deltabar = 1.0 / u_i - (u / u_i) * delta
        if delta <= 0 or deltabar <= 0:
            return None
        out.append((delta, deltabar))
    return out[0] + out[1]  # (delta1, deltabar1, delta2, deltabar2)


def complete_limits(kappa: int, epsilon: float, eta: float, alpha: float = 1.0) -> PredictedLimitSet:
    """Predicted limits for two competing walks on the complete graph.

    Zero self-repulsion gives the disjoint-support set (description only,
    a continuum); positive epsilon gives isolated points: uniform over any
    disjoint support pair, plus the overlapped shapes where shared vertices
    carry the small delta mass.
    """
    graph, _ = preset_complete(kappa, epsilon, eta, alpha)
    params_rec = {"kappa": kappa, "epsilon": epsilon, "eta": eta, "alpha": alpha}
    if epsilon == 0.0:
        return PredictedLimitSet(
            family="complete",
            parameters=params_rec,
            points=[],
            descriptions=[
                "disjoint supports: any pair of occupations with no shared vertex",
                "predicted long-run overlap: 0",
            ],
        )
    points = []
    vertices = range(1, kappa + 1)
    # each vertex is shared, private to walk 1, private to walk 2, or unused
    for assignment in product(range(4), repeat=kappa):
        shared = [v for v, a in zip(vertices, assignment) if a == 1]
        priv1 = [v for v, a in zip(vertices, assignment) if a == 2]
        priv2 = [v for v, a in zip(vertices, assignment) if a == 3]
        u, u1, u2 = len(shared), len(priv1), len(priv2)
        s1, s2 = u + u1, u + u2
        if s1 == 0 or s2 == 0:
            continue
        x = np.zeros(graph.dim)
        if u == 0:
            for v in priv1:
                x[graph.slot(0, v)] = 1.0 / s1
            for v in priv2:
                x[graph.slot(1, v)] = 1.0 / s2
            points.append(x)
        elif u1 > 0 and u2 > 0:
            deltas = complete_overlap_deltas(epsilon, u, u1, u2)
            if deltas is None:
                warnings.warn(
                    f"shape (u={u}, u1={u1}, u2={u2}) skipped: positivity "
                    f"fails at epsilon={epsilon} (epsilon too large)"
                )
                continue
            d1, db1, d2, db2 = deltas
            for v in shared:
                x[graph.slot(0, v)] = d1
                x[graph.slot(1, v)] = d2
            for v in priv1:
                x[graph.slot(0, v)] = db1
            for v in priv2:
                x[graph.slot(1, v)] = db2
            points.append(x)
    return PredictedLimitSet(
        family="complete", parameters=params_rec, points=points,
        descriptions=["uniform disjoint-support points and overlapped delta shapes"],
    )


def star_limits(m: int, epsilon: float, eta: float, alpha: float = 1.0) -> PredictedLimitSet:
    """Predicted limits for m competing walks on the star.

    Three regimes in the self-repulsion strength: 0 (one walk may share the
    center, a continuum), (0, 1/2) (a proper subset of walks holds the
    center at a common small mass), and (1/2, 1) (every walk holds the
    center).  The boundary value 1/2 is refused.
    """
    params_rec = {"m": m, "epsilon": epsilon, "eta": eta, "alpha": alpha}
    if epsilon == 0.0:
        return PredictedLimitSet(
            family="star",
            parameters=params_rec,
            points=[],
            descriptions=[
                "center occupied by at most one walk (any level); all other "
                "walks fully on their leaves"
            ],
        )
    if epsilon == 0.5 or epsilon >= 1.0 or epsilon < 0.0:
        raise RegimeBoundary(
            f"no prediction at epsilon={epsilon}; regimes are (0, 1/2) and (1/2, 1)"
        )
    graph, _ = preset_star(m, epsilon, eta, alpha)
    points = []
    if epsilon < 0.5:
        for mask in range(1, (1 << m) - 1):
            in_center = [i for i in range(m) if mask >> i & 1]
            c = epsilon / (len(in_center) + 2 * epsilon - 1)
            x = np.zeros(graph.dim)
            for i in range(m):
                center_mass = c if i in in_center else 0.0
                x[graph.slot(i, 1)] = center_mass
                x[graph.slot(i, i + 2)] = 1.0 - center_mass
            points.append(x)
        desc = "every proper nonempty subset of walks shares the center"
    else:
        c = epsilon / (m + 2 * epsilon - 1)
        x = np.zeros(graph.dim)
        for i in range(m):
            x[graph.slot(i, 1)] = c
            x[graph.slot(i, i + 2)] = 1.0 - c
        points.append(x)
        desc = "all walks share the center"
    return PredictedLimitSet(
        family="star", parameters=params_rec, points=points, descriptions=[desc]
    )


def star_pref_limits(eta_center: float, eta_base: float) -> PredictedLimitSet:
    """Predicted limits for the two-walk star with a preferred center.

    Below extra importance 1 the walks segregate; above 1 both sit on the
    center.  Exactly 1 is a phase boundary and is refused.
    """
    if eta_center <= 0:
        raise ValueError("center preference must be positive")
    if eta_center == 1.0:
        raise RegimeBoundary("no prediction at center preference exactly 1")
    if eta_center < 1.0:
        points = [np.array([1.0, 0.0, 0.0, 1.0]), np.array([0.0, 1.0, 1.0, 0.0])]
        desc = "segregated: one walk on the center, the other on its leaf"
    else:
        points = [np.array([1.0, 0.0, 1.0, 0.0])]
        desc = "both walks on the center"
    return PredictedLimitSet(
        family="star_pref",
        parameters={"eta_center": eta_center, "eta_base": eta_base},
        points=points,
        descriptions=[desc],
    )


@dataclass
class EdgeWord:
    """Cycle occupation as a sequence of per-edge tail masses."""

    values: np.ndarray  # a_k = mass of walk k at its tail vertex
    tol: float = 1e-6

    def __len__(self) -> int:
        return len(self.values)

    def is_mixed(self, k: int) -> bool:
        a = self.values[k]
        return self.tol < a < 1.0 - self.tol

    def orientation(self, k: int) -> int:
        """+1 for tail-occupied, -1 for head-occupied, 0 for mixed."""
        a = self.values[k]
        if a >= 1.0 - self.tol:
            return 1
        if a <= self.tol:
            return -1
        return 0

    def reversed_complement(self) -> "EdgeWord":
        """The same occupation read along the opposite cycle orientation."""
        return EdgeWord(values=(1.0 - self.values)[::-1].copy(), tol=self.tol)


def cycle_edge_word(m: int, p: np.ndarray, tol: float = 1e-6) -> EdgeWord:
    """Extract the edge word from a flat cycle state (walk k tail vertex is
    k+1; the last walk's tail is vertex m, stored after vertex 1)."""
    values = np.empty(m)
    for k in range(m - 1):
        values[k] = p[2 * k]  # block (k+1, k+2): tail first
    values[m - 1] = p[2 * (m - 1) + 1]  # block (1, m): tail second
    return EdgeWord(values=values, tol=tol)


def _has_forbidden_pattern(word: EdgeWord) -> bool:
    """Scan one orientation for the two excluded consecutive-edge patterns."""
    m = len(word)
    tol = word.tol
    a = word.values
    for k in range(m):
        w0, w1, w2 = a[k], a[(k + 1) % m], a[(k + 2) % m]
        # (anything with positive tail mass, head-occupied, tail-occupied)
        if w0 > tol and w1 <= tol and w2 >= 1.0 - tol:
            return True
        # (tail-occupied, head-occupied, anything with positive tail mass)
        if w0 >= 1.0 - tol and w1 <= tol and w2 > tol:
            return True
    return False


def classify_cycle_point(m: int, p: np.ndarray, tol: float = 1e-6) -> tuple[str, str]:
    """Classify a cycle fixed point by its edge word.

    Returns (class, admissibility).  Classes: "C1" all-half, "C2" the
    period-four alternating family (multiples of four only), "C3" all
    unmixed, "C4" mixed edges flanked by unmixed edges of opposite
    orientation, "none" otherwise.  Admissibility says whether the point
    survives as a possible single-point limit: C1 needs the cycle length
    divisible by four; C3/C4 must avoid the excluded patterns in either
    cycle orientation.
    """
    word = cycle_edge_word(m, p, tol=tol)
    a = word.values
    if np.all(np.abs(a - 0.5) <= tol):
        cls = "C1"
        adm = "tilde-admissible" if m % 4 == 0 else "excluded-pattern"
        return cls, adm
    mixed = [word.is_mixed(k) for k in range(m)]
    if not any(mixed):
        cls = "C3"
    elif (
        m % 4 == 0
        and all(mixed)
        and np.all(np.abs(a - (1.0 - np.roll(a, -2))) <= tol)
    ):
        return "C2", "n/a"
    else:
        cls = "C4"
        for k in range(m):
            if not mixed[k]:
                continue
            prev_k, next_k = (k - 1) % m, (k + 1) % m
            if mixed[prev_k] or mixed[next_k]:
                return "none", "n/a"
            # flanking unmixed edges of opposite orientation: the head mass
            # of the previous edge must match the tail mass of the next
            if abs((1.0 - a[prev_k]) - a[next_k]) > tol:
                return "none", "n/a"
    bad = _has_forbidden_pattern(word) or _has_forbidden_pattern(
        word.reversed_complement()
    )
    return cls, ("excluded-pattern" if bad else "tilde-admissible")


def cycle_epsilon_degeneracy(m: int, support) -> list[float]:
    """Self-repulsion strengths in (0, 1] where the cycle's fixed-point
    linear system degenerates for the given support.

    Full support gives the circulant roots cos(2*pi*k/m); otherwise each
    cyclic run of r consecutive fully-occupied edges contributes the
    tridiagonal roots cos(pi*k/(r+1)).
    """
    full = [len(s) == 2 for s in support]
    roots: list[float] = []
    if all(full):
        roots.extend(np.cos(2 * np.pi * np.arange(m) / m))
    else:
        # cyclic runs of consecutive fully-occupied edges
        runs = []
        k = 0
        visited = [False] * m
        for k in range(m):
            if full[k] and not visited[k] and not full[(k - 1) % m]:
                r = 0
                j = k
                while full[j] and not visited[j]:
                    visited[j] = True
                    r += 1
                    j = (j + 1) % m
                runs.append(r)
        for r in runs:
            roots.extend(np.cos(np.pi * np.arange(1, r + 1) / (r + 1)))
    eps = sorted(float(r) for r in roots if r > 1e-12)
    out: list[float] = []
    for e in eps:
        if not out or abs(e - out[-1]) > 1e-12:
            out.append(e)
    return out


def empirical_limit(graph: GraphSystem, trajectory: Trajectory, components) -> tuple[FixedPointComponent, float, float]:
    """Nearest fixed-point component to a trajectory endpoint.

    Returns (component, max-norm distance, final overlap)."""
    x = trajectory.final_state
    best, best_dist = None, np.inf
    for comp in components:
        dist = component_distance(graph, comp, x)
        if dist < best_dist:
            best, best_dist = comp, dist
    return best, float(best_dist), overlap(graph, x)


def nearest_point(points, x: np.ndarray) -> tuple[int, float]:
    """Index and max-norm distance of the closest point in a list."""
    dists = [float(np.max(np.abs(x - p))) for p in points]
    k = int(np.argmin(dists))
    return k, dists[k]
