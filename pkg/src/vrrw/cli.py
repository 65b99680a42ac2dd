"""Command-line entry point: batch simulation, analysis and reports.

Subcommands
-----------
simulate      run one or more seeded replicas, write CSV + figure + manifest
fixed-points  enumerate and print the fixed-point components of a system
stability     classify the fixed points (interior / boundary exclusion tests)
lyapunov      evaluate descent along a stored trajectory
predict       emit the predicted limit set of a preset family as JSON
match         compare stored trajectories against the predicted limit set
accept        run the acceptance suite (quick or full scale)

Configs are JSON.  Either the explicit walks schema understood by
``build_system`` or a preset reference of the form
``{"preset": {"family": "complete", "kappa": 3, "epsilon": 0.05,
"eta": 2.0, "alpha": 1.0}}`` (families: complete, star,
star_preferences, cycle) is accepted.

Exit codes: 0 ok, 1 criterion/validation failure, 2 I/O error,
3 size guard.  ``RVRW_THREADS`` caps the replica worker pool.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .case_studies import (
    complete_limits,
    nearest_point,
    star_limits,
    star_pref_limits,
)
from .dynamics import geometric_schedule, overlap, simulate
from .errors import SizeGuard, ValidationError, VrrwError
from .fixed_points import fixed_point_set, genericity_check
from .graph_model import (
    build_system,
    preset_complete,
    preset_cycle,
    preset_star,
    preset_star_preferences,
)
from .io import FLOAT_FMT, config_hash, load_trajectory, save_trajectory
from .lyapunov import monotonicity_monitor
from .stability import classify

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_IO = 2
EXIT_SIZE = 3


def system_from_config(config: dict):
    """Build (graph, params) from either config form."""
    if "preset" in config:
        spec = dict(config["preset"])
        family = spec.pop("family")
        builders = {
            "complete": preset_complete,
            "star": preset_star,
            "star_preferences": preset_star_preferences,
            "cycle": preset_cycle,
        }
        if family not in builders:
            raise ValidationError(f"unknown preset family {family!r}")
        return builders[family](**spec)
    return build_system(config)


def predicted_limits_from_config(config: dict):
    """Predicted limit set for a preset config (predictions exist only
    for the named families)."""
    if "preset" not in config:
        raise ValidationError("predictions require a preset config")
    spec = dict(config["preset"])
    family = spec.pop("family")
    if family == "complete":
        return complete_limits(spec["kappa"], spec["epsilon"], spec["eta"], spec.get("alpha", 1.0))
    if family == "star":
        return star_limits(spec["m"], spec["epsilon"], spec["eta"], spec.get("alpha", 1.0))
    if family == "star_preferences":
        return star_pref_limits(spec["eta_center"], spec["eta_base"])
    raise ValidationError(f"no prediction formulas for family {family!r}")


@dataclass
class ExperimentSpec:
    """A batch of seeded replicas of one system plus analysis toggles."""

    config: dict
    n_steps: int
    seeds: list[int]
    schedule_kind: str = "geometric"
    schedule_base: float = 1.2
    out_dir: Path = Path(".")
    out_format: str = "csv"
    analyses: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.seeds:
            raise ValidationError("at least one seed is required")
        if self.n_steps < 1:
            raise ValidationError("n_steps must be >= 1")

    def schedule(self) -> np.ndarray:
        if self.schedule_kind == "geometric":
            return geometric_schedule(self.n_steps, self.schedule_base)
        return np.arange(0, self.n_steps + 1, max(1, self.n_steps // 200), dtype=np.int64)


@dataclass
class RunManifest:
    """What a batch produced: version, config identity and output paths."""

    version: str
    config_hash: str
    n_steps: int
    seeds: list[int]
    outputs: dict[int, str] = field(default_factory=dict)
    wall_clock: float = 0.0

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "config_hash": self.config_hash,
            "n_steps": self.n_steps,
            "seeds": list(self.seeds),
            "outputs": {str(k): v for k, v in self.outputs.items()},
            "wall_clock": self.wall_clock,
        }


def _run_one(config: dict, n_steps: int, seed: int, schedule: np.ndarray, out_dir: str, fmt: str):
    """Worker body: simulate one replica and persist it."""
    graph, params = system_from_config(config)
    traj = simulate(graph, params, n_steps, seed, schedule=schedule)
    stem = Path(out_dir) / f"traj_seed{seed}"
    csv_path = stem.with_suffix(".csv")
    save_trajectory(graph, traj, csv_path, params_hash=config_hash(config))
    from .plotting import plot_trajectory

    plot_trajectory(graph, traj, stem.with_suffix(".png"))
    if fmt == "json":
        rows = {
            "ns": [int(n) for n in traj.ns],
            "states": [[float(v) for v in row] for row in traj.states],
            "overlaps": [float(v) for v in traj.overlaps],
        }
        stem.with_suffix(".states.json").write_text(json.dumps(rows))
    return seed, str(csv_path), traj.final_state


def run_experiment(spec: ExperimentSpec) -> RunManifest:
    """Execute every replica (worker pool capped by RVRW_THREADS), write
    trajectory files and the batch manifest; deterministic per (config,
    seed)."""
    t0 = time.time()
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    schedule = spec.schedule()
    manifest = RunManifest(
        version=__version__,
        config_hash=config_hash(spec.config),
        n_steps=spec.n_steps,
        seeds=list(spec.seeds),
    )
    workers = int(os.environ.get("RVRW_THREADS", "1"))
    finals = {}
    if workers > 1 and len(spec.seeds) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_one, spec.config, spec.n_steps, s, schedule,
                            str(spec.out_dir), spec.out_format)
                for s in spec.seeds
            ]
            for fut in concurrent.futures.as_completed(futures):
                seed, path, final = fut.result()
                manifest.outputs[seed] = path
                finals[seed] = final
    else:
        for s in spec.seeds:
            seed, path, final = _run_one(
                spec.config, spec.n_steps, s, schedule, str(spec.out_dir), spec.out_format
            )
            manifest.outputs[seed] = path
            finals[seed] = final

    graph, params = system_from_config(spec.config)
    reports = {}
    if "fixed-points" in spec.analyses or "stability" in spec.analyses:
        comps = fixed_point_set(graph, params)
        reports["fixed_points"] = [_component_row(c) for c in comps]
        if "stability" in spec.analyses:
            reports["stability"] = [
                {"point": [float(v) for v in r.component.point],
                 "classification": r.classification,
                 "flags": list(r.flags)}
                for r in classify(graph, params, comps)
            ]
    if "match" in spec.analyses:
        pred = predicted_limits_from_config(spec.config)
        reports["match"] = [
            _match_row(seed, finals[seed], pred.points) for seed in spec.seeds
        ]
    for name, payload in reports.items():
        (spec.out_dir / f"{name.replace('_', '-')}.json").write_text(json.dumps(payload, indent=1))
    manifest.wall_clock = time.time() - t0
    (spec.out_dir / "manifest.json").write_text(json.dumps(manifest.to_json(), indent=1))
    return manifest


def _component_row(c) -> dict:
    row = {
        "support": [sorted(s) for s in c.support],
        "kind": c.kind,
        "point": [float(v) for v in c.point],
        "flags": list(c.flags),
    }
    if c.basis is not None:
        row["basis"] = [[float(v) for v in b] for b in c.basis]
    return row


def _match_row(seed: int, final: np.ndarray, points) -> dict:
    if points:
        idx, dist = nearest_point(points, final)
        return {
            "seed": seed,
            "nearest": [float(v) for v in points[idx]],
            "distance": float(dist),
            "verdict": "match" if dist <= 0.05 else "far",
        }
    return {"seed": seed, "nearest": None, "distance": None, "verdict": "no-explicit-points"}


def _load_config(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _parse_seeds(args) -> list[int]:
    if args.seeds is not None:
        lo, _, hi = args.seeds.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [args.seed]


def _parse_schedule(text: str) -> tuple[str, float]:
    kind, _, base = text.partition(":")
    if kind not in ("geometric", "arithmetic"):
        raise ValidationError(f"unknown schedule kind {kind!r}")
    return kind, float(base) if base else 1.2


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    kind, base = _parse_schedule(args.schedule)
    analyses = []
    if args.fixed_points:
        analyses.append("fixed-points")
    if args.stability:
        analyses.extend(("fixed-points", "stability"))
    if args.match:
        analyses.append("match")
    spec = ExperimentSpec(
        config=config,
        n_steps=args.steps,
        seeds=_parse_seeds(args),
        schedule_kind=kind,
        schedule_base=base,
        out_dir=Path(args.out),
        out_format=args.format,
        analyses=tuple(analyses),
    )
    manifest = run_experiment(spec)
    print(f"wrote {len(manifest.outputs)} trajectories to {args.out} "
          f"(config {manifest.config_hash[:12]}, {manifest.wall_clock:.1f}s)")
    return EXIT_OK


def cmd_fixed_points(args) -> int:
    graph, params = system_from_config(_load_config(args.config))
    comps = fixed_point_set(graph, params)
    if args.format == "json":
        print(json.dumps([_component_row(c) for c in comps], indent=1))
    else:
        for c in comps:
            pt = " ".join(FLOAT_FMT % v for v in c.point)
            print(f"{c.kind}\t[{pt}]\t{','.join(c.flags) or '-'}")
    report = genericity_check(graph, params)
    if not report.all_regular:
        print(f"note: {len(report.degenerate_supports)} degenerate supports", file=sys.stderr)
    return EXIT_OK


def cmd_stability(args) -> int:
    graph, params = system_from_config(_load_config(args.config))
    comps = fixed_point_set(graph, params)
    reports = classify(graph, params, comps)
    if args.format == "json":
        print(json.dumps(
            [{"point": [float(v) for v in r.component.point],
              "classification": r.classification,
              "flags": list(r.flags)} for r in reports], indent=1))
    else:
        for r in reports:
            pt = " ".join(FLOAT_FMT % v for v in r.component.point)
            print(f"{r.classification}\t[{pt}]")
    return EXIT_OK


def cmd_lyapunov(args) -> int:
    graph, params = system_from_config(_load_config(args.config))
    try:
        traj = load_trajectory(graph, args.trajectory)
    except OSError as exc:
        print(f"error: cannot read trajectory: {exc}", file=sys.stderr)
        return EXIT_IO
    report = monotonicity_monitor(graph, params, traj.states)
    ok = not report.violations
    print(f"non-increasing: {ok}; max increase {report.max_increase:.3e}; "
          f"values {report.values[0]:.6f} -> {report.values[-1]:.6f}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_predict(args) -> int:
    config = _load_config(args.config)
    pred = predicted_limits_from_config(config)
    payload = {
        "family": pred.family,
        "parameters": pred.parameters,
        "points": [[float(v) for v in p] for p in pred.points],
        "descriptions": pred.descriptions,
    }
    print(json.dumps(payload, indent=1))
    return EXIT_OK


def cmd_match(args) -> int:
    config = _load_config(args.config)
    graph, _ = system_from_config(config)
    pred = predicted_limits_from_config(config)
    worst = EXIT_OK
    for path in args.trajectories:
        try:
            traj = load_trajectory(graph, path)
        except OSError as exc:
            print(f"error: cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_IO
        row = _match_row(traj.seed, traj.states[-1], pred.points)
        print(json.dumps(row))
        if row["verdict"] == "far":
            worst = EXIT_FAIL
    return worst


def cmd_accept(args) -> int:
    from .acceptance import acceptance_suite

    _, all_passed = acceptance_suite(args.scale)
    return EXIT_OK if all_passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vrrw", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"vrrw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run seeded replicas and persist them")
    sim.add_argument("--config", required=True)
    group = sim.add_mutually_exclusive_group()
    group.add_argument("--seed", type=int, default=0)
    group.add_argument("--seeds", help="inclusive range, e.g. 0..7")
    sim.add_argument("--steps", type=int, required=True)
    sim.add_argument("--schedule", default="geometric:1.2")
    sim.add_argument("--out", default="runs")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.add_argument("--fixed-points", action="store_true")
    sim.add_argument("--stability", action="store_true")
    sim.add_argument("--match", action="store_true")
    sim.set_defaults(fn=cmd_simulate)

    fp = sub.add_parser("fixed-points", help="enumerate fixed-point components")
    fp.add_argument("--config", required=True)
    fp.add_argument("--format", choices=("csv", "json"), default="csv")
    fp.set_defaults(fn=cmd_fixed_points)

    st = sub.add_parser("stability", help="classify fixed points")
    st.add_argument("--config", required=True)
    st.add_argument("--format", choices=("csv", "json"), default="csv")
    st.set_defaults(fn=cmd_stability)

    ly = sub.add_parser("lyapunov", help="descent check along a stored trajectory")
    ly.add_argument("--config", required=True)
    ly.add_argument("--trajectory", required=True)
    ly.set_defaults(fn=cmd_lyapunov)

    pr = sub.add_parser("predict", help="emit the predicted limit set as JSON")
    pr.add_argument("--config", required=True)
    pr.set_defaults(fn=cmd_predict)

    ma = sub.add_parser("match", help="verdict row per stored trajectory")
    ma.add_argument("--config", required=True)
    ma.add_argument("trajectories", nargs="+")
    ma.set_defaults(fn=cmd_match)

    ac = sub.add_parser("accept", help="run the acceptance suite")
    ac.add_argument("--scale", choices=("quick", "full"), default="quick")
    ac.set_defaults(fn=cmd_accept)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SizeGuard as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except VrrwError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
