# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for state ranking, neighbor assembly and walk replay.

Mirrors ``_kernels_py`` function for function; see that module for the
move-numbering convention both backends share.
"""
from math import comb, perm

import numpy as np

from libc.stdint cimport int64_t
from libc.stdlib cimport free, malloc

from ._tables import binomial_table, check_walk_inputs, falling_weights


cdef inline int64_t _rank_subset(const int64_t* m, int ell,
                                 const int64_t[:, ::1] C) noexcept nogil:
    cdef int64_t r = 0
    cdef int i
    for i in range(ell):
        r += C[m[i], i + 1]
    return r


cdef inline void _unrank_subset(int64_t r, int n, int ell,
                                const int64_t[:, ::1] C,
                                int64_t* out) noexcept nogil:
    cdef int i
    cdef int64_t m = n - 1
    for i in range(ell - 1, -1, -1):
        while C[m, i + 1] > r:
            m -= 1
        out[i] = m
        r -= C[m, i + 1]
        m -= 1


cdef inline int64_t _rank_tuple(const int64_t* p, int ell,
                                const int64_t[::1] w) noexcept nogil:
    cdef int64_t r = 0, d
    cdef int i, j
    for j in range(ell):
        d = p[j]
        for i in range(j):
            if p[i] < p[j]:
                d -= 1
        r += d * w[j]
    return r


cdef inline void _unrank_tuple(int64_t r, int n, int ell,
                               const int64_t[::1] w, char* used,
                               int64_t* out) noexcept nogil:
    cdef int j, v
    cdef int64_t d
    for v in range(n):
        used[v] = 0
    for j in range(ell):
        d = r // w[j]
        r = r % w[j]
        v = 0
        while True:
            if not used[v]:
                if d == 0:
                    break
                d -= 1
            v += 1
        used[v] = 1
        out[j] = v


cdef inline int _nth_free(const char* occ, int64_t b) noexcept nogil:
    cdef int v = 0
    while True:
        if not occ[v]:
            if b == 0:
                return v
            b -= 1
        v += 1


cdef inline void _uep_move(int64_t* m, char* occ, int n, int ell,
                           int64_t c) noexcept nogil:
    # m stays sorted; the vacated slot is closed and v inserted in order
    cdef int64_t a = c // (n - ell)
    cdef int v = _nth_free(occ, c % (n - ell))
    cdef int k
    occ[m[a]] = 0
    occ[v] = 1
    for k in range(a, ell - 1):
        m[k] = m[k + 1]
    k = ell - 1
    while k > 0 and m[k - 1] > v:
        m[k] = m[k - 1]
        k -= 1
    m[k] = v


cdef inline void _lep_move(int64_t* p, char* occ, int n, int ell,
                           int64_t c) noexcept nogil:
    cdef int64_t nmove = <int64_t>ell * (n - ell)
    cdef int64_t a, b, tmp
    cdef int v
    if c < nmove:
        a = c // (n - ell)
        v = _nth_free(occ, c % (n - ell))
        occ[p[a]] = 0
        occ[v] = 1
        p[a] = v
        return
    c -= nmove
    a = 0
    while c >= ell - 1 - a:
        c -= ell - 1 - a
        a += 1
    b = a + 1 + c
    tmp = p[a]
    p[a] = p[b]
    p[b] = tmp


def uep_offdiag(int n, int ell):
    """Row and column ranks of every ordered neighbor pair of the subset chain."""
    cdef const int64_t[:, ::1] C = binomial_table(n, ell)
    cdef int64_t total = comb(n, ell)
    cdef int64_t deg = <int64_t>ell * (n - ell)
    rows_arr = np.empty(total * deg, dtype=np.int64)
    cols_arr = np.empty(total * deg, dtype=np.int64)
    cdef int64_t[::1] rows = rows_arr
    cdef int64_t[::1] cols = cols_arr
    cdef int64_t* base = <int64_t*>malloc((ell + 1) * sizeof(int64_t))
    cdef int64_t* work = <int64_t*>malloc((ell + 1) * sizeof(int64_t))
    cdef char* occ = <char*>malloc(n + 1)
    cdef int64_t r, c, k = 0
    cdef int i
    if base == NULL or work == NULL or occ == NULL:
        free(base); free(work); free(occ)
        raise MemoryError()
    try:
        with nogil:
            for r in range(total):
                _unrank_subset(r, n, ell, C, base)
                for c in range(deg):
                    for i in range(n):
                        occ[i] = 0
                    for i in range(ell):
                        work[i] = base[i]
                        occ[base[i]] = 1
                    _uep_move(work, occ, n, ell, c)
                    rows[k] = r
                    cols[k] = _rank_subset(work, ell, C)
                    k += 1
    finally:
        free(base); free(work); free(occ)
    return rows_arr, cols_arr


def lep_offdiag(int n, int ell):
    """Row and column ranks of every ordered neighbor pair of the tuple chain."""
    cdef const int64_t[::1] w = falling_weights(n, ell)
    cdef int64_t total = perm(n, ell)
    cdef int64_t deg = <int64_t>ell * (n - ell) + <int64_t>ell * (ell - 1) // 2
    rows_arr = np.empty(total * deg, dtype=np.int64)
    cols_arr = np.empty(total * deg, dtype=np.int64)
    cdef int64_t[::1] rows = rows_arr
    cdef int64_t[::1] cols = cols_arr
    cdef int64_t* base = <int64_t*>malloc((ell + 1) * sizeof(int64_t))
    cdef int64_t* work = <int64_t*>malloc((ell + 1) * sizeof(int64_t))
    cdef char* occ = <char*>malloc(n + 1)
    cdef int64_t r, c, k = 0
    cdef int i
    if base == NULL or work == NULL or occ == NULL:
        free(base); free(work); free(occ)
        raise MemoryError()
    try:
        with nogil:
            for r in range(total):
                _unrank_tuple(r, n, ell, w, occ, base)
                for c in range(deg):
                    for i in range(n):
                        occ[i] = 0
                    for i in range(ell):
                        work[i] = base[i]
                        occ[base[i]] = 1
                    _lep_move(work, occ, n, ell, c)
                    rows[k] = r
                    cols[k] = _rank_tuple(work, ell, w)
                    k += 1
    finally:
        free(base); free(work); free(occ)
    return rows_arr, cols_arr


def uep_walk(int n, int ell, int64_t start, const int64_t[::1] jumps,
             const int64_t[::1] choices):
    """Apply each replica's move sequence from ``start``; return final ranks."""
    check_walk_inputs(n, ell, start, jumps, choices, <int64_t>ell * (n - ell), comb(n, ell))
    cdef const int64_t[:, ::1] C = binomial_table(n, ell)
    cdef Py_ssize_t m = jumps.shape[0]
    out_arr = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t* base = <int64_t*>malloc((ell + 1) * sizeof(int64_t))
    cdef int64_t* work = <int64_t*>malloc((ell + 1) * sizeof(int64_t))
    cdef char* occ = <char*>malloc(n + 1)
    cdef Py_ssize_t rep, k = 0
    cdef int64_t s
    cdef int i
    if base == NULL or work == NULL or occ == NULL:
        free(base); free(work); free(occ)
        raise MemoryError()
    try:
        with nogil:
            _unrank_subset(start, n, ell, C, base)
            for rep in range(m):
                for i in range(n):
                    occ[i] = 0
                for i in range(ell):
                    work[i] = base[i]
                    occ[base[i]] = 1
                for s in range(jumps[rep]):
                    _uep_move(work, occ, n, ell, choices[k])
                    k += 1
                out[rep] = _rank_subset(work, ell, C)
    finally:
        free(base); free(work); free(occ)
    return out_arr


def lep_walk(int n, int ell, int64_t start, const int64_t[::1] jumps,
             const int64_t[::1] choices):
    """Tuple-chain counterpart of :func:`uep_walk`."""
    check_walk_inputs(n, ell, start, jumps, choices,
                      <int64_t>ell * (n - ell) + comb(ell, 2), perm(n, ell))
    cdef const int64_t[::1] w = falling_weights(n, ell)
    cdef Py_ssize_t m = jumps.shape[0]
    out_arr = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t* base = <int64_t*>malloc((ell + 1) * sizeof(int64_t))
    cdef int64_t* work = <int64_t*>malloc((ell + 1) * sizeof(int64_t))
    cdef char* occ = <char*>malloc(n + 1)
    cdef Py_ssize_t rep, k = 0
    cdef int64_t s
    cdef int i
    if base == NULL or work == NULL or occ == NULL:
        free(base); free(work); free(occ)
        raise MemoryError()
    try:
        with nogil:
            _unrank_tuple(start, n, ell, w, occ, base)
            for rep in range(m):
                for i in range(n):
                    occ[i] = 0
                for i in range(ell):
                    work[i] = base[i]
                    occ[base[i]] = 1
                for s in range(jumps[rep]):
                    _lep_move(work, occ, n, ell, choices[k])
                    k += 1
                out[rep] = _rank_tuple(work, ell, w)
    finally:
        free(base); free(work); free(occ)
    return out_arr
