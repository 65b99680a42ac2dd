"""Walk dynamics: transition kernel, simulation, mean-field flow.

The joint occupation state is a flat float vector of length d (see
:mod:`vrrw.graph_model` for the layout).  The transition kernel weighs each
vertex of walk i by its occupation times a power of the vertex's current
importance, which couples the walks at shared vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._speed import run_segment
from .errors import DomainError, StepRejected
from .graph_model import GraphSystem, ParameterSet

#: per-step negativity guard for the flow integrator
_NEG_GUARD = -1e-8


def weight_bases(graph: GraphSystem, params: ParameterSet, x: np.ndarray) -> np.ndarray:
    """The pre-exponent importance of every (walk, vertex) slot at state x."""
    bases = params.eta_flat + params.interaction @ x
    if np.any(bases <= 0.0):
        k = int(np.argmin(bases))
        i, v = graph.slot_owner(k)
        raise DomainError(
            f"non-positive weight base {bases[k]} at walk {i + 1}, vertex {v}"
        )
    return bases


def weight(graph: GraphSystem, params: ParameterSet, x: np.ndarray, walk: int, vertex: int) -> float:
    """Sampling weight of one vertex for one walk at state x."""
    return float(weight_bases(graph, params, x)[graph.slot(walk, vertex)] ** params.alpha)


def transition_kernel(graph: GraphSystem, params: ParameterSet, x: np.ndarray) -> np.ndarray:
    """Next-step vertex distribution for every walk, flat layout."""
    h = weight_bases(graph, params, x) ** params.alpha
    num = x * h
    pi = np.empty_like(num)
    for i in range(graph.num_walks):
        blk = graph.block(i)
        pi[blk] = num[blk] / num[blk].sum()
    return pi


def transition_kernel_batch(graph: GraphSystem, params: ParameterSet, xs: np.ndarray) -> np.ndarray:
    """Vectorized kernel over an (n, d) array of states."""
    bases = params.eta_flat + xs @ params.interaction.T
    if np.any(bases <= 0.0):
        raise DomainError("non-positive weight base in batch")
    num = xs * bases**params.alpha
    pi = np.empty_like(num)
    for i in range(graph.num_walks):
        blk = graph.block(i)
        pi[:, blk] = num[:, blk] / num[:, blk].sum(axis=1, keepdims=True)
    return pi


def overlap(graph: GraphSystem, x: np.ndarray) -> float:
    """Co-occupation mass summed over vertices shared by walk pairs."""
    left, right = graph.shared_slot_pairs()
    return float(np.dot(x[left], x[right]))


def vector_field(graph: GraphSystem, params: ParameterSet, x: np.ndarray) -> np.ndarray:
    """Mean-field drift: kernel minus current state; sums to 0 per walk."""
    return transition_kernel(graph, params, x) - x


def _project_simplex(graph: GraphSystem, x: np.ndarray) -> np.ndarray:
    if x.min() < _NEG_GUARD:
        raise StepRejected(
            f"flow step produced coordinate {x.min():.3e}; reduce dt"
        )
    y = np.clip(x, 0.0, None)
    for i in range(graph.num_walks):
        blk = graph.block(i)
        y[blk] /= y[blk].sum()
    return y


def integrate_flow(graph: GraphSystem, params: ParameterSet, x0: np.ndarray, t_end: float, dt: float = 0.01):
    """Classical Runge-Kutta path of the mean-field flow from x0.

    Returns (times, states) with states[k] the point at times[k]; every
    state is projected back to the product of simplices after each step.
    """
    n_steps = int(round(t_end / dt))
    times = np.arange(n_steps + 1) * dt
    path = np.empty((n_steps + 1, graph.dim))
    path[0] = x0
    x = np.asarray(x0, dtype=float).copy()
    f = lambda y: vector_field(graph, params, y)
    for k in range(n_steps):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x = _project_simplex(graph, x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4))
        path[k + 1] = x
    return times, path


@dataclass
class WalkConfiguration:
    """Current vertex of every walk plus the step counter."""

    positions: tuple[int, ...]
    n: int


@dataclass
class Trajectory:
    """A recorded simulation run."""

    seed: int
    n_steps: int
    schedule: np.ndarray
    ns: np.ndarray
    states: np.ndarray  # (len(ns), d)
    overlaps: np.ndarray
    final: WalkConfiguration
    replica: int = 0
    choices: np.ndarray | None = field(default=None, repr=False)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def walk_rngs(seed: int, replica: int, num_walks: int) -> list[np.random.Generator]:
    """One counter-based stream per walk, derived from (seed, replica, walk)
    so replica results do not depend on scheduling."""
    return [
        np.random.Generator(np.random.Philox(key=np.array(
            [seed, (replica << 32) | walk], dtype=np.uint64)))
        for walk in range(num_walks)
    ]


def occupation_from_counts(graph: GraphSystem, counts: np.ndarray, n: int) -> np.ndarray:
    """Occupation fractions (1 + visits) / (d^i + n), flat layout."""
    x = np.empty(graph.dim)
    for i, d_i in enumerate(graph.degrees):
        blk = graph.block(i)
        x[blk] = (1.0 + counts[blk]) / (d_i + n)
    return x


def step(graph: GraphSystem, params: ParameterSet, counts: np.ndarray, n: int, uniforms) -> tuple[int, ...]:
    """Advance every walk one step, mutating ``counts``.

    ``uniforms`` supplies one number per walk.  The arithmetic mirrors the
    compiled segment kernel operation-for-operation so both paths produce
    bit-identical paths from the same uniforms.
    """
    d = graph.dim
    eta = params.eta_flat
    interaction = params.interaction
    alpha = params.alpha
    x = [0.0] * d
    for i, d_i in enumerate(graph.degrees):
        denom = d_i + n
        for k in range(graph.offsets[i], graph.offsets[i + 1]):
            x[k] = (1.0 + counts[k]) / denom
    w = [0.0] * d
    chosen_slots = []
    for i in range(graph.num_walks):
        lo, hi = graph.offsets[i], graph.offsets[i + 1]
        tot = 0.0
        for k in range(lo, hi):
            base = eta[k]
            for j in range(d):
                base += interaction[k, j] * x[j]
            if base <= 0.0:
                raise DomainError("non-positive weight base during step")
            wk = x[k] * base if alpha == 1.0 else x[k] * base**alpha
            w[k] = wk
            tot += wk
        thresh = float(uniforms[i]) * tot
        acc = 0.0
        chosen = hi - 1
        for k in range(lo, hi):
            acc += w[k]
            if acc >= thresh:
                chosen = k
                break
        chosen_slots.append(chosen)
    for k in chosen_slots:
        counts[k] += 1
    return tuple(graph.slot_owner(k)[1] for k in chosen_slots)


def geometric_schedule(n_steps: int, base: float = 1.2) -> np.ndarray:
    """Recording steps 0, ceil(base^k), ..., n_steps (deduplicated)."""
    pts = {0, n_steps}
    v = 1.0
    while True:
        v *= base
        n = int(np.ceil(v))
        if n >= n_steps:
            break
        pts.add(n)
    return np.array(sorted(pts), dtype=np.int64)


def simulate(
    graph: GraphSystem,
    params: ParameterSet,
    n_steps: int,
    seed: int,
    schedule: np.ndarray | None = None,
    replica: int = 0,
    record_choices: bool = False,
) -> Trajectory:
    """Run the reinforced walks for n_steps from the uniform initial state.

    Deterministic given (seed, replica): each walk consumes its own
    counter-based stream, one uniform per step.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if schedule is None:
        schedule = geometric_schedule(n_steps)
    schedule = np.unique(np.asarray(schedule, dtype=np.int64))
    if schedule.size and (schedule[0] < 0 or schedule[-1] > n_steps):
        raise ValueError("schedule entries must lie in [0, n_steps]")

    m = graph.num_walks
    rngs = walk_rngs(seed, replica, m)
    counts = np.zeros(graph.dim, dtype=np.int64)
    eta = params.eta_flat
    interaction = params.interaction
    offsets = np.asarray(graph.offsets, dtype=np.int64)
    degrees = np.asarray(graph.degrees, dtype=np.int64)

    ns, states, overlaps = [], [], []
    all_choices = [] if record_choices else None
    last_positions = None

    def record(n):
        x = occupation_from_counts(graph, counts, n)
        ns.append(n)
        states.append(x)
        overlaps.append(overlap(graph, x))

    rec = 0
    n = 0
    while rec < len(schedule) and schedule[rec] == n:
        record(n)
        rec += 1
    while n < n_steps:
        n_next = int(schedule[rec]) if rec < len(schedule) else n_steps
        length = n_next - n
        uniforms = np.empty((m, length))
        for i in range(m):
            uniforms[i] = rngs[i].random(length)
        choices = np.empty((m, length), dtype=np.int64)
        status = run_segment(
            counts, n, length, uniforms, eta, interaction, params.alpha,
            offsets, degrees, choices,
        )
        if status != 0:
            raise DomainError("non-positive weight base during simulation")
        if record_choices:
            all_choices.append(choices)
        last_positions = tuple(
            graph.slot_owner(int(k))[1] for k in choices[:, -1]
        )
        n = n_next
        while rec < len(schedule) and schedule[rec] == n:
            record(n)
            rec += 1
    return Trajectory(
        seed=seed,
        n_steps=n_steps,
        schedule=schedule,
        ns=np.array(ns, dtype=np.int64),
        states=np.array(states),
        overlaps=np.array(overlaps),
        final=WalkConfiguration(positions=last_positions, n=n_steps),
        replica=replica,
        choices=np.concatenate(all_choices, axis=1) if record_choices else None,
    )


def sa_residual(graph: GraphSystem, params: ParameterSet, x_n: np.ndarray, x_next: np.ndarray, chosen_vertices, n: int) -> float:
    """Deviation of one realized step from its stochastic-approximation form.

    Decomposes the increment into drift plus noise, each scaled by the
    per-walk gain 1/(d^i + n + 1), and returns the max-norm defect; an exact
    step satisfies the identity to roundoff.
    """
    pi = transition_kernel(graph, params, x_n)
    xi = np.zeros(graph.dim)
    for i, v in enumerate(chosen_vertices):
        xi[graph.slot(i, v)] = 1.0
    drift = vector_field(graph, params, x_n)
    noise = xi - pi
    rhs = np.empty(graph.dim)
    for i, d_i in enumerate(graph.degrees):
        blk = graph.block(i)
        rhs[blk] = (drift[blk] + noise[blk]) / (d_i + n + 1)
    return float(np.max(np.abs(x_next - x_n - rhs)))
