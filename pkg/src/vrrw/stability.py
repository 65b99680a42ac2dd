"""Spectral and ratio-based exclusion tests at fixed points.

Two tools rule out convergence targets: at boundary points, the limiting
jump-in/stay-out ratio of the kernel at an unoccupied vertex; at interior
points, eigenvalues of the kernel Jacobian with real part above one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import weight_bases
from .errors import NoConvergence, NotInterior
from .fixed_points import TOL_POS, FixedPointComponent, verify_fixed_point
from .graph_model import GraphSystem, ParameterSet

INTERIOR_MARGIN = 1e-7
BOUNDARY_MARGIN = 1e-9


def jacobian(graph: GraphSystem, params: ParameterSet, x: np.ndarray) -> np.ndarray:
    """Analytic Jacobian of the transition kernel at x (d x d)."""
    alpha = params.alpha
    bases = weight_bases(graph, params, x)
    h = bases**alpha
    num = x * h
    # d(x_k h_k)/dx_l: identity part plus the interaction channel at the
    # shared vertex (interaction[k, l] vanishes unless both slots own it)
    dnum = np.diag(h) + (x * alpha * bases ** (alpha - 1.0))[:, None] * params.interaction
    jac = np.empty((graph.dim, graph.dim))
    for i in range(graph.num_walks):
        blk = graph.block(i)
        n_i = num[blk].sum()
        dn_i = dnum[blk, :].sum(axis=0)
        jac[blk, :] = dnum[blk, :] / n_i - np.outer(num[blk], dn_i) / n_i**2
    return jac


def spectrum(matrix: np.ndarray, check_residuals: bool = False) -> np.ndarray:
    """Eigenvalues of a dense real matrix, sorted by descending real part.

    With ``check_residuals`` each eigenpair is verified to satisfy
    ``|A v - lambda v| <= 1e-8 |A|``.
    """
    a = np.asarray(matrix, dtype=float)
    try:
        if check_residuals:
            vals, vecs = np.linalg.eig(a)
            scale = np.linalg.norm(a)
            for k in range(len(vals)):
                res = np.linalg.norm(a @ vecs[:, k] - vals[k] * vecs[:, k])
                if res > 1e-8 * max(scale, 1.0):
                    raise NoConvergence(
                        f"eigenpair {k} residual {res:.3e} exceeds tolerance"
                    )
        else:
            vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    order = np.lexsort((-vals.imag, -vals.real))
    return vals[order]


def interior_instability_test(graph: GraphSystem, params: ParameterSet, p: np.ndarray, margin: float = INTERIOR_MARGIN) -> str:
    """Verdict for an interior fixed point from the kernel spectrum.

    "Excluded" needs every real part bounded away from 1 and at least one
    above 1; real parts within the margin of 1 give "Inconclusive".
    """
    if np.min(p) <= TOL_POS:
        raise NotInterior("point has a zero coordinate")
    vals = spectrum(jacobian(graph, params, p))
    re = vals.real
    if np.any(np.abs(re - 1.0) <= margin):
        return "Inconclusive"
    if np.any(re > 1.0 + margin):
        return "Excluded"
    return "Candidate"


def boundary_ratio_test(graph: GraphSystem, params: ParameterSet, p: np.ndarray, margin: float = BOUNDARY_MARGIN):
    """Limiting kernel-to-occupation ratios at every unoccupied slot.

    Returns [(walk, vertex, ratio, verdict)]; a ratio above 1 excludes
    convergence to p.
    """
    h = weight_bases(graph, params, p) ** params.alpha
    results = []
    for i in range(graph.num_walks):
        blk = graph.block(i)
        n_i = float(np.dot(p[blk], h[blk]))
        for v in graph.vertex_sets[i]:
            k = graph.slot(i, v)
            if p[k] <= TOL_POS:
                ratio = float(h[k] / n_i)
                if ratio > 1.0 + margin:
                    verdict = "excluded"
                elif abs(ratio - 1.0) <= margin:
                    verdict = "inconclusive"
                else:
                    verdict = "ok"
                results.append((i, v, ratio, verdict))
    return results


@dataclass
class StabilityReport:
    """Exclusion-test outcome for one fixed-point component."""

    component: FixedPointComponent
    eigenvalues: np.ndarray
    interior_verdict: str | None
    boundary_verdicts: list
    classification: str  # ExcludedBoundary | ExcludedInterior | Candidate | Inconclusive
    flags: list[str] = field(default_factory=list)

    @property
    def is_candidate(self) -> bool:
        return self.classification == "Candidate"


def classify(graph: GraphSystem, params: ParameterSet, components) -> list[StabilityReport]:
    """Run the applicable exclusion test on every component.

    Boundary points get the ratio test, interior points the spectral test.
    Continuum components are tested at their base point; the verdict is
    informational there (flagged), but still separates candidates.
    """
    reports = []
    for comp in components:
        p = comp.point
        flags = list(comp.flags)
        if not comp.is_isolated:
            flags.append("continuum_base_point")
        vals = spectrum(jacobian(graph, params, p))
        interior_verdict = None
        boundary_verdicts = []
        if np.min(p) > TOL_POS:
            interior_verdict = interior_instability_test(graph, params, p)
            if interior_verdict == "Excluded":
                classification = "ExcludedInterior"
            else:
                classification = interior_verdict
        else:
            boundary_verdicts = boundary_ratio_test(graph, params, p)
            if any(v == "excluded" for (_, _, _, v) in boundary_verdicts):
                classification = "ExcludedBoundary"
            elif any(v == "inconclusive" for (_, _, _, v) in boundary_verdicts):
                classification = "Inconclusive"
            else:
                classification = "Candidate"
        reports.append(
            StabilityReport(
                component=comp,
                eigenvalues=vals,
                interior_verdict=interior_verdict,
                boundary_verdicts=boundary_verdicts,
                classification=classification,
                flags=flags,
            )
        )
    return reports


def candidates(reports) -> list[StabilityReport]:
    """Reports not excluded by either test."""
    return [r for r in reports if r.classification not in ("ExcludedBoundary", "ExcludedInterior")]
