"""Trajectory persistence and config canonicalization.

Trajectories are stored as CSV (one row per recorded step, walk and
vertex, with the record's overlap repeated) plus a JSON sidecar carrying
seed, config hash, step count and schedule.  All floats are written with
15 significant digits so a round-trip reproduces the recorded values.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .dynamics import Trajectory, WalkConfiguration
from .graph_model import GraphSystem

FLOAT_FMT = "%.15g"


def canonical_config_text(config: dict) -> str:
    """Key-sorted, compact JSON rendering used for hashing."""
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_config_text(config).encode()).hexdigest()


def save_trajectory(graph: GraphSystem, traj: Trajectory, csv_path, params_hash: str = "") -> None:
    """Write the trajectory CSV and its JSON sidecar (same stem, .json)."""
    csv_path = Path(csv_path)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "walk", "vertex", "occupation", "overlap"])
        for r, n in enumerate(traj.ns):
            ov = FLOAT_FMT % traj.overlaps[r]
            for i in range(graph.num_walks):
                for v in graph.vertex_sets[i]:
                    writer.writerow(
                        [int(n), i + 1, v, FLOAT_FMT % traj.states[r, graph.slot(i, v)], ov]
                    )
    sidecar = {
        "seed": int(traj.seed),
        "params_hash": params_hash,
        "n_steps": int(traj.n_steps),
        "schedule": [int(n) for n in traj.schedule],
        "replica": int(traj.replica),
    }
    csv_path.with_suffix(".json").write_text(json.dumps(sidecar, indent=1))


def load_trajectory(graph: GraphSystem, csv_path) -> Trajectory:
    """Rebuild a Trajectory from its CSV and sidecar (walk history is not
    persisted, so the final configuration is unavailable)."""
    csv_path = Path(csv_path)
    sidecar = json.loads(csv_path.with_suffix(".json").read_text())
    ns, states, overlaps = [], [], []
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        cur_n = None
        for row in reader:
            n = int(row["n"])
            if n != cur_n:
                cur_n = n
                ns.append(n)
                states.append(np.empty(graph.dim))
                overlaps.append(float(row["overlap"]))
            i, v = int(row["walk"]) - 1, int(row["vertex"])
            states[-1][graph.slot(i, v)] = float(row["occupation"])
    return Trajectory(
        seed=sidecar["seed"],
        n_steps=sidecar["n_steps"],
        schedule=np.array(sidecar["schedule"], dtype=np.int64),
        ns=np.array(ns, dtype=np.int64),
        states=np.array(states),
        overlaps=np.array(overlaps),
        final=WalkConfiguration(positions=None, n=sidecar["n_steps"]),
        replica=sidecar.get("replica", 0),
    )
