"""Figure rendering for recorded trajectories."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .dynamics import Trajectory  # noqa: E402
from .graph_model import GraphSystem  # noqa: E402


def plot_trajectory(graph: GraphSystem, traj: Trajectory, out_path) -> None:
    """Two-panel figure: per-(walk, vertex) occupation curves and the
    overlap, both against the step count."""
    fig, (ax_occ, ax_ov) = plt.subplots(2, 1, figsize=(8, 7), sharex=True)
    ns = traj.ns
    for i in range(graph.num_walks):
        for v in graph.vertex_sets[i]:
            ax_occ.plot(ns, traj.states[:, graph.slot(i, v)], label=f"walk {i + 1}, v{v}")
    ax_occ.set_ylabel("occupation")
    ax_occ.set_ylim(-0.02, 1.02)
    if graph.dim <= 12:
        ax_occ.legend(fontsize=7, ncol=2)
    ax_ov.plot(ns, traj.overlaps, color="k")
    ax_ov.set_ylabel("overlap")
    ax_ov.set_xlabel("step")
    if len(ns) > 1 and ns[-1] > 100:
        ax_occ.set_xscale("symlog")
    fig.suptitle(f"seed {traj.seed}, {traj.n_steps} steps")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
