"""Energy function for the mean-field flow and its descent diagnostics.

L couples each walk's occupation linearly through the importances and
quadratically through the shared-vertex interactions.  Along the flow L
decreases strictly off the fixed-point set; the decrease can be rewritten
as a sum of per-walk entropy-like inner products, which this module
computes independently as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import transition_kernel, vector_field, weight_bases
from .graph_model import GraphSystem, ParameterSet


def lyapunov_value(graph: GraphSystem, params: ParameterSet, x: np.ndarray) -> float:
    """L(x) = -eta.x - x.R.x/2 with R the shared-vertex interaction matrix."""
    return float(-params.eta_flat @ x - 0.5 * x @ params.interaction @ x)


def lyapunov_gradient(graph: GraphSystem, params: ParameterSet, x: np.ndarray) -> np.ndarray:
    """dL/dx_v^i = -(eta_v^i + sum_j rho_v^{ij} x_v^j); interaction symmetry
    folds the 1/2 of the quadratic term."""
    return -(params.eta_flat + params.interaction @ x)


@dataclass
class LyapunovEvaluation:
    """L, its gradient, and the flow-descent value in both forms."""

    value: float
    gradient: np.ndarray
    inner: float  # <grad L, F>
    entropy_form: float  # per-walk reduced rate-matrix expression
    normalizers: np.ndarray  # N^i(x)
    weights: np.ndarray  # g^i(x) = N^i(x)^(1/alpha)


def descent_value(graph: GraphSystem, params: ParameterSet, x: np.ndarray) -> LyapunovEvaluation:
    """Rate of change of L along the mean-field flow at x.

    The direct form is the gradient-field inner product; the independent
    form contracts phi(occupation/kernel ratios) against the reduced rate
    matrix of each walk's support.  The two agree to roundoff.
    """
    alpha = params.alpha
    grad = lyapunov_gradient(graph, params, x)
    f = vector_field(graph, params, x)
    inner = float(grad @ f)

    h = weight_bases(graph, params, x) ** alpha
    pi = transition_kernel(graph, params, x)
    normalizers = np.empty(graph.num_walks)
    weights = np.empty(graph.num_walks)
    entropy = 0.0
    for i in range(graph.num_walks):
        blk = graph.block(i)
        x_i, pi_i = x[blk], pi[blk]
        normalizers[i] = float(np.dot(x_i, h[blk]))
        weights[i] = normalizers[i] ** (1.0 / alpha)
        supp = x_i > 0.0
        if not np.any(supp):
            continue
        xs, ps = x_i[supp], pi_i[supp]
        # reduced rate matrix -I + Pi (rows all equal to the kernel row)
        gamma = -np.eye(len(xs)) + np.tile(ps, (len(xs), 1))
        phi = -((xs / ps) ** (-1.0 / alpha))
        entropy += weights[i] * float(phi @ (xs @ gamma))
    return LyapunovEvaluation(
        value=lyapunov_value(graph, params, x),
        gradient=grad,
        inner=inner,
        entropy_form=float(entropy),
        normalizers=normalizers,
        weights=weights,
    )


@dataclass
class MonotonicityReport:
    """L along a flow path plus any monotonicity violations."""

    values: np.ndarray
    violations: list[int]  # indices where L increased beyond tolerance
    max_increase: float
    strict_ok: bool  # strict decrease wherever the field is non-negligible


def monotonicity_monitor(
    graph: GraphSystem,
    params: ParameterSet,
    path: np.ndarray,
    tol: float = 1e-9,
    field_floor: float = 1e-6,
) -> MonotonicityReport:
    """Check L is non-increasing along a flow path, strictly so wherever
    the drift exceeds ``field_floor`` in max-norm."""
    values = np.array([lyapunov_value(graph, params, x) for x in path])
    diffs = np.diff(values)
    violations = [int(k) for k in np.nonzero(diffs > tol)[0]]
    strict_ok = True
    for k, dv in enumerate(diffs):
        fnorm = float(np.max(np.abs(vector_field(graph, params, path[k]))))
        if fnorm > field_floor and dv >= 0.0:
            strict_ok = False
    return MonotonicityReport(
        values=values,
        violations=violations,
        max_increase=float(diffs.max()) if len(diffs) else 0.0,
        strict_ok=strict_ok,
    )
