"""Integer lookup tables consumed by both kernel backends."""
from math import comb

import numpy as np

INT64_MAX = 2**63 - 1


def binomial_table(n, ell):
    """Table ``C[m, k] = binom(m, k)`` for ``0 <= m < n`` and ``0 <= k <= ell``.

    Entries that do not fit in int64 are saturated; ranking never reads them
    when the state count itself fits.
    """
    table = np.zeros((max(n, 1), ell + 1), dtype=np.int64)
    for m in range(n):
        for k in range(ell + 1):
            table[m, k] = min(comb(m, k), INT64_MAX)
    return table


def falling_weights(n, ell):
    """Mixed-radix place values ``w[j] = (n-j-1)(n-j-2)...(n-ell+1)``."""
    w = np.ones(max(ell, 1), dtype=np.int64)
    acc = 1
    for j in range(ell - 1, -1, -1):
        w[j] = acc
        acc *= n - j
    return w


def check_walk_inputs(n, ell, start, jumps, choices, degree, total):
    """Reject walk inputs that would index outside the state or move tables."""
    if not 0 <= start < total:
        raise ValueError(f"start rank {start} out of range [0, {total})")
    jumps = np.asarray(jumps)
    choices = np.asarray(choices)
    if len(jumps) and jumps.min() < 0:
        raise ValueError("jump counts must be nonnegative")
    if int(jumps.sum()) != len(choices):
        raise ValueError(f"{len(choices)} move choices for {int(jumps.sum())} jumps")
    if len(choices) and (choices.min() < 0 or choices.max() >= degree):
        raise ValueError(f"move choices must lie in [0, {degree})")
