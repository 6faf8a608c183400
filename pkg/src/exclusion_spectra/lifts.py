"""Lifting functions from ``ell`` balls to ``ell + 1`` balls.

For subsets the lift sums over the ways to drop one member; for tuples the
lift forgets the position of one chosen ball. Both carry eigenvectors of
the level-``ell`` generator to eigenvectors at level ``ell + 1``, and
``verify_lift_lemmas`` checks that numerically together with what the
orthogonal complement of the lifted span looks like.
"""
from functools import lru_cache
from math import comb

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import ParameterError
from .generator import build_lep_generator, build_uep_generator
from .report import Report
from .spectral import cayley_spectrum, eigenbasis
from .state_index import (Kind, ProcessParams, TupleState, enumerate_subsets,
                          enumerate_tuples, rank_subset, rank_tuple, state_count,
                          SubsetState)


@lru_cache(maxsize=64)
def uep_lift_matrix(n, ell):
    """Sparse ``C(n,ell+1) x C(n,ell)`` 0/1 matrix with ``(L f)(J) = sum_{j in J} f(J minus j)``."""
    if ell + 1 > n:
        raise ParameterError(f"cannot lift to {ell + 1} balls on {n} vertices")
    rows, cols = [], []
    for r, J in enumerate(enumerate_subsets(n, ell + 1)):
        m = J.members
        for a in range(len(m)):
            rows.append(r)
            cols.append(rank_subset(SubsetState(m[:a] + m[a + 1:]), n))
    shape = (comb(n, ell + 1), comb(n, ell))
    return sp.csr_array((np.ones(len(rows)), (rows, cols)), shape=shape)


@lru_cache(maxsize=64)
def lep_lift_matrix(n, ell, i):
    """Sparse matrix of ``f -> f^i``; ``i`` is the 1-based ball whose position is ignored."""
    if ell + 1 > n:
        raise ParameterError(f"cannot lift to {ell + 1} balls on {n} vertices")
    if not 1 <= i <= ell + 1:
        raise ParameterError(f"ball index must be in 1..{ell + 1}, got {i}")
    tuples = enumerate_tuples(n, ell + 1)
    cols = [rank_tuple(TupleState(x.positions[:i - 1] + x.positions[i:]), n) for x in tuples]
    shape = (len(tuples), state_count(n, ell, Kind.LEP))
    return sp.csr_array((np.ones(len(cols)), (np.arange(len(cols)), cols)), shape=shape)


def _as_vector(f, size):
    f = np.asarray(f, dtype=float)
    if f.shape[0] != size:
        raise ParameterError(f"function has {f.shape[0]} entries, expected {size}")
    return f


def lift_uep(f, n, ell):
    """Lift a function on ``ell``-subsets (indexed by rank) to ``(ell+1)``-subsets."""
    L = uep_lift_matrix(n, ell)
    return L @ _as_vector(f, L.shape[1])


def lift_lep(f, i, n, ell):
    """``f^i(v_1..v_{ell+1}) = f`` evaluated with the ``i``-th coordinate removed."""
    L = lep_lift_matrix(n, ell, i)
    return L @ _as_vector(f, L.shape[1])


def _residual(M, vecs, lam):
    """Column-wise ``||M v - lam v|| / (||M|| ||v||)``."""
    res = M @ vecs - vecs * lam
    scale = np.linalg.norm(M, 2) if M.size else 1.0
    norms = np.linalg.norm(vecs, axis=0)
    return np.linalg.norm(res, axis=0) / (max(scale, 1.0) * np.maximum(norms, 1e-300))


def _max_offdiag_cosine(vecs):
    if vecs.shape[1] < 2:
        return 0.0
    G = vecs.T @ vecs
    d = np.sqrt(np.diag(G))
    C = G / np.outer(d, d)
    np.fill_diagonal(C, 0.0)
    return float(np.abs(C).max())


def _complement(vecs, tol):
    """Orthonormal basis of the orthogonal complement of ``span(vecs)``."""
    if vecs.shape[1] == 0:
        return np.eye(vecs.shape[0])
    return scipy.linalg.null_space(vecs.T, rcond=tol)


def _uep_part(n, ell, alpha, tol, report):
    if 2 * ell >= n:
        report.add(f"UEP lifts n={n} ell={ell}", True, "not applicable: needs ell < n/2")
        return
    basis = eigenbasis(build_uep_generator(ProcessParams(n, ell, alpha, Kind.UEP)))
    M1 = -build_uep_generator(ProcessParams(n, ell + 1, alpha, Kind.UEP)).toarray()
    L = uep_lift_matrix(n, ell)
    lam = basis.eigenvalues
    qualifying = lam <= alpha * ell * (n - ell + 1) + tol * max(1.0, alpha * n * n)
    lifted = L @ basis.vectors
    norms = np.linalg.norm(lifted, axis=0)
    q_norms = norms[qualifying]
    report.add(f"UEP lift nonvanishing n={n} ell={ell}", bool(np.all(q_norms >= 1e-9)),
               f"min lifted norm {q_norms.min():.3g} over {qualifying.sum()} vectors")
    res = _residual(M1, lifted[:, qualifying], lam[qualifying])
    report.add(f"UEP lift eigen-equation n={n} ell={ell}", bool(np.all(res <= tol)),
               f"max relative residual {res.max(initial=0.0):.3g}")
    cos = _max_offdiag_cosine(lifted[:, qualifying])
    report.add(f"UEP lift orthogonality n={n} ell={ell}", cos <= tol, f"max |cos| {cos:.3g}")
    comp = _complement(lifted[:, qualifying], 1e-10)
    expected_dim = comb(n, ell + 1) - comb(n, ell)
    target = alpha * (ell + 1) * (n - ell)
    if comp.shape[1]:
        ev = scipy.linalg.eigvalsh(comp.T @ M1 @ comp)
        dev = float(np.abs(ev - target).max())
    else:
        dev = 0.0
    report.add(f"UEP complement n={n} ell={ell}",
               comp.shape[1] == expected_dim and dev <= tol * max(1.0, target),
               f"dim {comp.shape[1]} (expected {expected_dim}), eigenvalue {target:g}, max dev {dev:.3g}")


def _lep_part(n, ell, alpha, tol, report):
    basis = eigenbasis(build_lep_generator(ProcessParams(n, ell, alpha, Kind.LEP)))
    M1 = -build_lep_generator(ProcessParams(n, ell + 1, alpha, Kind.LEP)).toarray()
    lam = basis.eigenvalues
    blocks = []
    worst_res, worst_cos = 0.0, 0.0
    for i in range(1, ell + 2):
        lifted = lep_lift_matrix(n, ell, i) @ basis.vectors
        worst_res = max(worst_res, float(_residual(M1, lifted, lam).max(initial=0.0)))
        worst_cos = max(worst_cos, _max_offdiag_cosine(lifted))
        blocks.append(lifted)
    report.add(f"LEP lift eigen-equation n={n} ell={ell}", worst_res <= tol,
               f"max relative residual {worst_res:.3g}")
    report.add(f"LEP lift orthogonality n={n} ell={ell}", worst_cos <= tol,
               f"max |cos| within one ball index {worst_cos:.3g}")
    comp = _complement(np.hstack(blocks), 1e-10)
    k1 = ell + 1
    admissible = alpha * (n * k1 - comb(k1, 2) - cayley_spectrum(k1).values)
    if comp.shape[1] == 0:
        report.add(f"LEP complement n={n} ell={ell}", True, "complement is empty")
        return
    R = comp.T @ M1 @ comp
    leak = float(np.linalg.norm(M1 @ comp - comp @ R)) / max(1.0, np.linalg.norm(M1, 2))
    ev = scipy.linalg.eigvalsh(R)
    dist = np.abs(ev[:, None] - admissible[None, :]).min(axis=1)
    scale = max(1.0, alpha * n * n)
    report.add(f"LEP complement invariant n={n} ell={ell}", leak <= tol, f"relative leak {leak:.3g}")
    report.add(f"LEP complement eigenvalues admissible n={n} ell={ell}",
               bool(np.all(dist <= tol * scale)),
               f"{comp.shape[1]} eigenvalues, max distance {dist.max():.3g} to "
               f"{sorted({float(v) for v in np.round(admissible, 9)})}")
    floor = alpha * k1 * (n - k1 + 1)
    report.add(f"LEP fresh-eigenvalue floor n={n} ell={ell}", bool(ev.min() >= floor - 1e-6),
               f"min fresh eigenvalue {ev.min():.6g} >= {floor:g}")


def verify_lift_lemmas(n, ell, alpha=1.0, tol=1e-9):
    """Check the lifting properties from level ``ell`` to ``ell + 1``.

    Unlabelled (only when ``ell < n/2``): lifts of eigenvectors with eigenvalue
    at most ``alpha*ell*(n-ell+1)`` are nonzero eigenvectors for the same
    eigenvalue, stay orthogonal, and their complement is a single eigenspace
    for ``alpha*(ell+1)*(n-ell)``.

    Labelled: every ball-index lift is an eigenvector, lifts with the same
    ball index stay orthogonal, and ``-Q`` restricted to the complement of all
    lifts has eigenvalues in ``alpha*(n(ell+1) - C(ell+1,2) - spec(A_{ell+1}))``.
    """
    if not 0 <= ell < n:
        raise ParameterError(f"need 0 <= ell < n to lift, got n={n}, ell={ell}")
    report = Report(f"lift lemmas n={n} ell={ell} alpha={alpha:g}")
    _uep_part(n, ell, alpha, tol, report)
    _lep_part(n, ell, alpha, tol, report)
    return report
