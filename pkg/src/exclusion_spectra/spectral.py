"""Spectra of exclusion-process generators.

Closed-form spectrum of the unlabelled process, a dense eigensolver oracle,
the admissible-eigenvalue envelope for the labelled process built from
Cayley-graph spectra, and the multiplicity checks that go with it.
"""
import json
from dataclasses import dataclass
from functools import lru_cache
from math import comb, perm

import numpy as np
import scipy.linalg

from .errors import CapacityError, ParameterError
from .generator import CayleyAdjacency, Generator, build_cayley_adjacency
from .report import Report
from .state_index import Kind, ProcessParams

#: Largest matrix the dense oracle accepts.
MAX_DENSE = 6000


@dataclass(frozen=True)
class SpectrumSummary:
    """Distinct eigenvalues (ascending) paired with their multiplicities.

    ``kind`` is ``"UEP"``, ``"LEP"`` or ``"CAYLEY"``; for the first two the
    values are eigenvalues of ``-Q``, for Cayley summaries of ``A_k``.
    """

    n: int
    ell: int
    alpha: float
    kind: str
    pairs: tuple

    @property
    def total(self):
        return sum(m for _, m in self.pairs)

    @property
    def values(self):
        return np.array([v for v, _ in self.pairs])

    @property
    def multiplicities(self):
        return np.array([m for _, m in self.pairs], dtype=np.int64)

    def multiplicity_of(self, value, tol=1e-6):
        return sum(m for v, m in self.pairs if abs(v - value) <= tol)

    def to_dict(self):
        return {
            "n": self.n,
            "ell": self.ell,
            "alpha": self.alpha,
            "kind": self.kind,
            "pairs": [{"value": v, "multiplicity": m} for v, m in self.pairs],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        pairs = tuple((float(p["value"]), int(p["multiplicity"])) for p in d["pairs"])
        return cls(int(d["n"]), int(d["ell"]), float(d["alpha"]), str(d["kind"]), pairs)


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Orthonormal eigenvectors of ``-Q``; column ``i`` pairs with ``eigenvalues[i]``."""

    generator: Generator
    eigenvalues: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class EnvelopeSet:
    n: int
    ell: int
    alpha: float
    values: tuple

    def contains(self, x, tol=1e-6):
        return any(abs(x - v) <= tol for v in self.values)

    def covers(self, xs, tol=1e-6):
        """True when every element of ``xs`` is within ``tol`` of the set."""
        return all(self.contains(x, tol) for x in xs)


def cluster_eigenvalues(values, tol):
    """Merge sorted values whose consecutive gaps are at most ``tol``.

    Returns ``(mean, count)`` pairs in ascending order.
    """
    vals = np.sort(np.asarray(values, dtype=float))
    if len(vals) == 0:
        return ()
    breaks = np.flatnonzero(np.diff(vals) > tol) + 1
    return tuple((float(g.mean()) + 0.0, len(g)) for g in np.split(vals, breaks))


def default_cluster_tol(matrix):
    if isinstance(matrix, CayleyAdjacency):
        return 1e-6 * max(1.0, matrix.k**2)
    p = matrix.params
    return 1e-6 * max(p.alpha * p.n**2, 1e-300)


def _dense_operator(matrix):
    if matrix.dim > MAX_DENSE:
        raise CapacityError(f"dense oracle limited to dim <= {MAX_DENSE}, got {matrix.dim}")
    m = matrix.toarray()
    if isinstance(matrix, Generator):
        m = -m
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > 1e-12 * scale:
        raise RuntimeError("oracle received a non-symmetric matrix")
    return m


def brute_force_spectrum(matrix, cluster_tol=None):
    """Spectrum of ``-Q`` (or of ``A_k``) by dense symmetric eigendecomposition."""
    tol = default_cluster_tol(matrix) if cluster_tol is None else cluster_tol
    ev = scipy.linalg.eigvalsh(_dense_operator(matrix))
    pairs = cluster_eigenvalues(ev, tol)
    if isinstance(matrix, CayleyAdjacency):
        return SpectrumSummary(matrix.k, matrix.k, 1.0, "CAYLEY", pairs)
    p = matrix.params
    return SpectrumSummary(p.n, p.ell, p.alpha, p.kind.value, pairs)


def eigenbasis(g):
    """Full orthonormal eigenbasis of ``-Q``; the eigenvalue-0 vector is taken positive."""
    ev, vecs = scipy.linalg.eigh(_dense_operator(g))
    zero = np.abs(ev) <= default_cluster_tol(g)
    flip = zero & (vecs.sum(axis=0) < 0)
    vecs[:, flip] *= -1
    return EigenBasis(generator=g, eigenvalues=ev, vectors=vecs)


def project_indicator(basis, x):
    """Coefficients ``c_i(x) = <e_x, phi_i>`` of the unit vector at state ``x``."""
    if not 0 <= x < basis.vectors.shape[0]:
        raise ParameterError(f"state rank {x} out of range")
    return basis.vectors[x, :].copy()


def uep_spectrum_closed_form(p):
    """Eigenvalues ``i*alpha*(n-i+1)`` with multiplicity ``C(n,i) - C(n,i-1)``, ``i = 0..ell``."""
    if p.kind is not Kind.UEP:
        raise ParameterError("closed-form spectrum is for the unlabelled process")
    p.require_half()
    pairs = tuple(
        (p.alpha * i * (p.n - i + 1), comb(p.n, i) - (comb(p.n, i - 1) if i else 0))
        for i in range(p.ell + 1)
    )
    return SpectrumSummary(p.n, p.ell, p.alpha, "UEP", pairs)


@lru_cache(maxsize=None)
def cayley_spectrum(k):
    """Distinct eigenvalues of ``A_k`` with multiplicities, from the dense oracle.

    The spectrum is integral; values within 1e-6 of an integer are snapped.
    """
    s = brute_force_spectrum(build_cayley_adjacency(k))
    snapped = tuple((float(round(v)) if abs(v - round(v)) <= 1e-6 else v, m) for v, m in s.pairs)
    return SpectrumSummary(s.n, s.ell, s.alpha, s.kind, snapped)


def envelope(n, ell, alpha=1.0):
    """Admissible eigenvalues for the labelled process with ``ell`` balls.

    Starts from ``{0, alpha*n}`` and adds ``alpha*(n(k+1) - C(k+1,2) - spec(A_{k+1}))``
    for each ``k`` up to ``ell - 1``; ``ell = n`` reuses ``ell = n - 1``.
    """
    ProcessParams(n, ell, alpha, Kind.LEP)
    top = n - 1 if ell == n else ell
    vals = [0.0]
    if top >= 1:
        vals.append(alpha * n)
    for k in range(1, top):
        mu = cayley_spectrum(k + 1).values
        vals.extend(alpha * (n * (k + 1) - comb(k + 1, 2) - mu))
    tol = 1e-9 * max(1.0, alpha * n * n)
    merged = tuple(v for v, _ in cluster_eigenvalues(vals, tol))
    return EnvelopeSet(n, ell, alpha, merged)


def symmetric_core(values, center, tol=1e-9):
    """Largest subset symmetric about ``center``: keep ``v`` when ``2*center - v`` is present.

    Accepts an :class:`EnvelopeSet` (and returns one) or any iterable of reals
    (returns a sorted tuple).
    """
    vals = values.values if isinstance(values, EnvelopeSet) else tuple(sorted(values))
    kept = tuple(v for v in vals if any(abs(2 * center - v - w) <= tol for w in vals))
    if isinstance(values, EnvelopeSet):
        return EnvelopeSet(values.n, values.ell, values.alpha, kept)
    return kept


def band_limits(n, j, alpha):
    """Half-open band ``[alpha*j(n-j+1), alpha*(j+1)(n-j))`` of eigenvalues first appearing at level ``j``."""
    return alpha * j * (n - j + 1), alpha * (j + 1) * (n - j)


def multiplicity_checks(s, tol=1e-6, next_spectrum=None):
    """Multiplicity claims for a labelled-process spectrum ``s``.

    * eigenvalue ``alpha*n`` has multiplicity ``ell*(n-1)``;
    * for ``1 <= j <= min(ell, n-ell)`` the band starting at ``alpha*j(n-j+1)``
      holds at most ``(n)_j * C(ell, j)`` eigenvalues;
    * with ``next_spectrum`` (same ``n``, ``ell + 1``), every distinct
      eigenvalue of ``s`` reappears there.
    """
    n, ell, alpha = s.n, s.ell, s.alpha
    report = Report(f"multiplicity checks LEP n={n} ell={ell} alpha={alpha:g}")
    got = s.multiplicity_of(alpha * n, tol)
    report.add(f"mult(alpha*n) == ell*(n-1) [n={n}, ell={ell}]", got == ell * (n - 1),
               f"got {got}, expected {ell * (n - 1)}")
    for j in range(1, min(ell, n - ell) + 1):
        lo, hi = band_limits(n, j, alpha)
        inside = sum(m for v, m in s.pairs if lo - tol <= v < hi - tol)
        bound = perm(n, j) * comb(ell, j)
        report.add(f"band j={j} [n={n}, ell={ell}]", inside <= bound,
                   f"[{lo:g}, {hi:g}) holds {inside} <= {bound}")
    if next_spectrum is not None:
        missing = [v for v, _ in s.pairs if next_spectrum.multiplicity_of(v, tol) == 0]
        report.add(f"spectrum increasing in ell [n={n}, {ell}->{ell + 1}]", not missing,
                   f"missing {missing}" if missing else "")
    return report
