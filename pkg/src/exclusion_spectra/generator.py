"""Sparse symmetric generators of the exclusion processes and Cayley adjacency
matrices of the symmetric group generated by transpositions.
"""
from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.sparse as sp

from . import kernels
from .errors import CapacityError, ParameterError
from .state_index import Kind, ProcessParams, state_count

#: Stored-entry budget for an assembled sparse matrix.
MAX_ENTRIES = 50_000_000


@dataclass(frozen=True, eq=False)
class SparseSymmetric:
    """Coordinate storage sorted by (row, col); arrays are read-only."""

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    def tocsr(self):
        return sp.csr_array((self.vals, (self.rows, self.cols)), shape=(self.dim, self.dim))

    def toarray(self):
        out = np.zeros((self.dim, self.dim))
        out[self.rows, self.cols] = self.vals
        return out

    def __matmul__(self, v):
        return self.tocsr() @ v

    @property
    def nnz(self):
        return len(self.vals)


@dataclass(frozen=True, eq=False)
class Generator(SparseSymmetric):
    params: ProcessParams = None

    @property
    def diagonal_rate(self):
        """Total jump rate out of every state (the negated diagonal)."""
        return self.params.alpha * self.params.degree


@dataclass(frozen=True, eq=False)
class CayleyAdjacency(SparseSymmetric):
    k: int = 0


def _canonical(rows, cols, vals):
    order = np.lexsort((cols, rows))
    arrays = rows[order], cols[order], vals[order]
    for a in arrays:
        a.setflags(write=False)
    return arrays


def _check_budget(dim, degree):
    if dim * (degree + 1) > MAX_ENTRIES:
        raise CapacityError(
            f"matrix with {dim} states and {degree} neighbors each exceeds "
            f"the {MAX_ENTRIES}-entry budget")


def build_uep_generator(p):
    if p.kind is not Kind.UEP:
        raise ParameterError("build_uep_generator needs kind=UEP")
    return _build(p, kernels.uep_offdiag)


def build_lep_generator(p):
    if p.kind is not Kind.LEP:
        raise ParameterError("build_lep_generator needs kind=LEP")
    return _build(p, kernels.lep_offdiag)


def build_generator(p):
    """Dispatch on ``p.kind``."""
    return build_uep_generator(p) if p.kind is Kind.UEP else build_lep_generator(p)


def _build(p, offdiag):
    dim = p.num_states
    _check_budget(dim, p.degree)
    r, c = offdiag(p.n, p.ell)
    diag = np.arange(dim, dtype=np.int64)
    rows = np.concatenate([r, diag])
    cols = np.concatenate([c, diag])
    vals = np.concatenate([np.full(len(r), p.alpha), np.full(dim, -p.alpha * p.degree)])
    rows, cols, vals = _canonical(rows, cols, vals)
    return Generator(dim=dim, rows=rows, cols=cols, vals=vals, params=p)


def build_cayley_adjacency(k):
    """0/1 adjacency on the ``k!`` permutations, indexed by the tuple rank with ``ell = n = k``."""
    if int(k) != k or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    dim = state_count(k, k, Kind.LEP)
    _check_budget(dim, comb(k, 2))
    r, c = kernels.lep_offdiag(k, k)
    rows, cols, vals = _canonical(r, c, np.ones(len(r)))
    return CayleyAdjacency(dim=dim, rows=rows, cols=cols, vals=vals, k=int(k))


@dataclass(frozen=True)
class AffineMap:
    """``x -> offset + scale * x``, applied elementwise."""

    scale: float
    offset: float

    def __call__(self, x):
        return self.offset + self.scale * np.asarray(x, dtype=float)


def relate_cayley_to_lep(k, alpha):
    """Map an eigenvalue ``mu`` of ``A_k`` to ``alpha*(C(k,2) - mu)``, an eigenvalue of ``-Q^(k,k,alpha)``."""
    return AffineMap(scale=-float(alpha), offset=float(alpha) * comb(k, 2))


def parity(perm):
    """0 for even permutations, 1 for odd ones."""
    seen = [False] * len(perm)
    swaps = 0
    for i in range(len(perm)):
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length:
            swaps += length - 1
    return swaps % 2


def write_coo_text(matrix, fh):
    """Dump as a ``dim N`` header followed by ``row col value`` lines."""
    fh.write(f"dim {matrix.dim}\n")
    for r, c, v in zip(matrix.rows.tolist(), matrix.cols.tolist(), matrix.vals.tolist()):
        fh.write(f"{r} {c} {v!r}\n")


def read_coo_text(fh):
    """Inverse of :func:`write_coo_text`; returns ``(dim, rows, cols, vals)``."""
    header = fh.readline().split()
    if len(header) != 2 or header[0] != "dim":
        raise ParameterError(f"bad header line {' '.join(header)!r}")
    dim = int(header[1])
    body = [line.split() for line in fh if line.strip()]
    rows = np.array([int(b[0]) for b in body], dtype=np.int64)
    cols = np.array([int(b[1]) for b in body], dtype=np.int64)
    vals = np.array([float(b[2]) for b in body])
    return dim, rows, cols, vals

