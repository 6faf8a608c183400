"""Pure-Python kernels; the fallback when the compiled extension is missing.

Every function here has a twin with the same signature in ``_kernels.pyx``
and both must produce identical integer outputs.

Move numbering (shared by the neighbor builders and the walks): a state
with ``ell`` balls has ``ell*(n-ell)`` ball moves, numbered ``a*(n-ell)+b``
where ``a`` is the ball (or sorted member) index and ``b`` indexes the
unoccupied vertices in increasing order. Labelled states then have
``ell*(ell-1)/2`` transpositions, numbered lexicographically by ball pair.
"""
from math import comb, perm

import numpy as np

from ._tables import binomial_table, check_walk_inputs, falling_weights


def _rank_subset(members, C):
    r = 0
    for i, m in enumerate(members):
        r += int(C[m, i + 1])
    return r


def _unrank_subset(r, n, ell, C):
    out = [0] * ell
    m = n - 1
    for i in range(ell - 1, -1, -1):
        while C[m, i + 1] > r:
            m -= 1
        out[i] = m
        r -= int(C[m, i + 1])
        m -= 1
    return out


def _rank_tuple(pos, w):
    r = 0
    for j, p in enumerate(pos):
        d = p
        for i in range(j):
            if pos[i] < p:
                d -= 1
        r += d * int(w[j])
    return r


def _unrank_tuple(r, n, ell, w):
    used = [False] * n
    out = [0] * ell
    for j in range(ell):
        d, r = divmod(r, int(w[j]))
        v = 0
        while True:
            if not used[v]:
                if d == 0:
                    break
                d -= 1
            v += 1
        used[v] = True
        out[j] = v
    return out


def _uep_move(members, occ, n, ell, c):
    nfree = n - ell
    a, b = divmod(c, nfree)
    v = 0
    while True:
        if not occ[v]:
            if b == 0:
                break
            b -= 1
        v += 1
    old = members[a]
    occ[old] = False
    occ[v] = True
    rest = members[:a] + members[a + 1:]
    k = 0
    while k < len(rest) and rest[k] < v:
        k += 1
    return rest[:k] + [v] + rest[k:]


def _lep_move(pos, occ, n, ell, c):
    nmove = ell * (n - ell)
    if c < nmove:
        a, b = divmod(c, n - ell)
        v = 0
        while True:
            if not occ[v]:
                if b == 0:
                    break
                b -= 1
            v += 1
        occ[pos[a]] = False
        occ[v] = True
        pos[a] = v
        return pos
    c -= nmove
    a = 0
    while c >= ell - 1 - a:
        c -= ell - 1 - a
        a += 1
    b = a + 1 + c
    pos[a], pos[b] = pos[b], pos[a]
    return pos


def uep_offdiag(n, ell):
    """Row and column ranks of every ordered neighbor pair of the subset chain."""
    C = binomial_table(n, ell)
    total = comb(n, ell)
    deg = ell * (n - ell)
    rows = np.empty(total * deg, dtype=np.int64)
    cols = np.empty(total * deg, dtype=np.int64)
    k = 0
    for r in range(total):
        members = _unrank_subset(r, n, ell, C)
        for c in range(deg):
            occ = [False] * n
            for m in members:
                occ[m] = True
            nxt = _uep_move(list(members), occ, n, ell, c)
            rows[k] = r
            cols[k] = _rank_subset(nxt, C)
            k += 1
    return rows, cols


def lep_offdiag(n, ell):
    """Row and column ranks of every ordered neighbor pair of the tuple chain."""
    w = falling_weights(n, ell)
    total = perm(n, ell)
    deg = ell * (n - ell) + ell * (ell - 1) // 2
    rows = np.empty(total * deg, dtype=np.int64)
    cols = np.empty(total * deg, dtype=np.int64)
    k = 0
    for r in range(total):
        pos = _unrank_tuple(r, n, ell, w)
        for c in range(deg):
            occ = [False] * n
            for p in pos:
                occ[p] = True
            nxt = _lep_move(list(pos), occ, n, ell, c)
            rows[k] = r
            cols[k] = _rank_tuple(nxt, w)
            k += 1
    return rows, cols


def uep_walk(n, ell, start, jumps, choices):
    """Apply each replica's move sequence from ``start``; return final ranks.

    Replica ``i`` consumes the next ``jumps[i]`` entries of ``choices``.
    """
    check_walk_inputs(n, ell, start, jumps, choices, ell * (n - ell), comb(n, ell))
    C = binomial_table(n, ell)
    start_members = _unrank_subset(int(start), n, ell, C)
    out = np.empty(len(jumps), dtype=np.int64)
    k = 0
    for i, nj in enumerate(jumps):
        members = list(start_members)
        occ = [False] * n
        for m in members:
            occ[m] = True
        for _ in range(int(nj)):
            members = _uep_move(members, occ, n, ell, int(choices[k]))
            k += 1
        out[i] = _rank_subset(members, C)
    return out


def lep_walk(n, ell, start, jumps, choices):
    """Tuple-chain counterpart of :func:`uep_walk`."""
    check_walk_inputs(n, ell, start, jumps, choices, ell * (n - ell) + comb(ell, 2), perm(n, ell))
    w = falling_weights(n, ell)
    start_pos = _unrank_tuple(int(start), n, ell, w)
    out = np.empty(len(jumps), dtype=np.int64)
    k = 0
    for i, nj in enumerate(jumps):
        pos = list(start_pos)
        occ = [False] * n
        for p in pos:
            occ[p] = True
        for _ in range(int(nj)):
            pos = _lep_move(pos, occ, n, ell, int(choices[k]))
            k += 1
        out[i] = _rank_tuple(pos, w)
    return out

