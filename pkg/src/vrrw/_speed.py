"""Compiled inner loop for the walk simulation.

The kernel advances all walks over a segment of steps, consuming
pre-generated uniforms (one per walk per step) and updating integer visit
counts in place.  Occupation fractions are recomputed from the counts at
every step, so no floating-point state drifts across the segment.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def run_segment(counts, n0, length, uniforms, eta, interaction, alpha, offsets, degrees, choices):
    """Advance ``length`` steps starting at step index ``n0``.

    counts:  int64[d] visit counts, updated in place.
    uniforms: float64[m, length] i.i.d. uniforms, one row per walk.
    choices: int64[m, length] output slot indices chosen at each step.
    Returns 0 on success, -1 if a weight base was non-positive.
    """
    m = len(degrees)
    d = len(eta)
    x = np.empty(d)
    w = np.empty(d)
    for t in range(length):
        n = n0 + t
        for i in range(m):
            denom = degrees[i] + n
            for k in range(offsets[i], offsets[i + 1]):
                x[k] = (1.0 + counts[k]) / denom
        for i in range(m):
            lo = offsets[i]
            hi = offsets[i + 1]
            tot = 0.0
            for k in range(lo, hi):
                base = eta[k]
                for j in range(d):
                    base += interaction[k, j] * x[j]
                if base <= 0.0:
                    return -1
                if alpha == 1.0:
                    wk = x[k] * base
                else:
                    wk = x[k] * base ** alpha
                w[k] = wk
                tot += wk
            thresh = uniforms[i, t] * tot
            acc = 0.0
            chosen = hi - 1
            for k in range(lo, hi):
                acc += w[k]
                if acc >= thresh:
                    chosen = k
                    break
            choices[i, t] = chosen
        for i in range(m):
            counts[choices[i, t]] += 1
    return 0
