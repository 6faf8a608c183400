"""State spaces of the exclusion processes on the complete graph K_n.

Unlabelled states are ``ell``-subsets of ``{0, ..., n-1}`` ranked in
colexicographic order; labelled states are ordered ``ell``-tuples of
distinct vertices ranked by a falling-factorial (Lehmer-style) code.
"""
from dataclasses import dataclass
from enum import Enum
from math import comb, perm

from .errors import CapacityError, ParameterError

#: Largest state count representable in the int64 rank arithmetic.
MAX_STATES = 2**63 - 1


class Kind(str, Enum):
    UEP = "UEP"
    LEP = "LEP"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ParameterError(f"unknown process kind {value!r}") from None


@dataclass(frozen=True)
class ProcessParams:
    """Vertex count ``n``, ball count ``ell``, edge-clock rate ``alpha``."""

    n: int
    ell: int
    alpha: float = 1.0
    kind: Kind = Kind.UEP

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n!r}")
        if int(self.ell) != self.ell or not 0 <= self.ell <= self.n:
            raise ParameterError(f"need 0 <= ell <= n, got ell={self.ell!r}, n={self.n}")
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "ell", int(self.ell))
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def num_states(self):
        return state_count(self.n, self.ell, self.kind)

    @property
    def degree(self):
        """Number of neighbors of every state (rate-alpha moves)."""
        moves = self.ell * (self.n - self.ell)
        if self.kind is Kind.LEP:
            moves += comb(self.ell, 2)
        return moves

    def require_half(self):
        """Reject ``ell > n/2``, the range where the closed forms do not apply."""
        if 2 * self.ell > self.n:
            raise ParameterError(
                f"closed form needs ell <= n/2, got n={self.n}, ell={self.ell}")


@dataclass(frozen=True)
class SubsetState:
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(int(m) for m in self.members))


@dataclass(frozen=True)
class TupleState:
    positions: tuple

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(int(p) for p in self.positions))


def state_count(n, ell, kind):
    """``C(n, ell)`` for UEP, ``(n)_ell`` for LEP; raises on int64 overflow."""
    if not 0 <= ell <= n:
        raise ParameterError(f"need 0 <= ell <= n, got ell={ell}, n={n}")
    size = comb(n, ell) if Kind.parse(kind) is Kind.UEP else perm(n, ell)
    if size > MAX_STATES:
        raise CapacityError(f"state space of size {size} exceeds 2**63 - 1")
    return size


def _check_subset(s, n):
    m = s.members
    if any(v < 0 or v >= n for v in m) or any(a >= b for a, b in zip(m, m[1:])):
        raise ParameterError(f"{m} is not a strictly increasing subset of range({n})")


def _check_tuple(x, n):
    p = x.positions
    if any(v < 0 or v >= n for v in p) or len(set(p)) != len(p):
        raise ParameterError(f"{p} is not a tuple of distinct vertices in range({n})")


def rank_subset(s, n):
    """Colex rank ``sum_i C(m_i, i+1)`` of a sorted subset."""
    _check_subset(s, n)
    state_count(n, len(s.members), Kind.UEP)
    return sum(comb(m, i + 1) for i, m in enumerate(s.members))


def unrank_subset(r, n, ell):
    total = state_count(n, ell, Kind.UEP)
    if not 0 <= r < total:
        raise ParameterError(f"rank {r} outside [0, {total})")
    out = [0] * ell
    m = n - 1
    for i in range(ell - 1, -1, -1):
        while comb(m, i + 1) > r:
            m -= 1
        out[i] = m
        r -= comb(m, i + 1)
        m -= 1
    return SubsetState(tuple(out))


def enumerate_subsets(n, ell):
    """All ``ell``-subsets of ``range(n)``; position in the list equals rank."""
    total = state_count(n, ell, Kind.UEP)
    return [unrank_subset(r, n, ell) for r in range(total)]


def rank_tuple(x, n):
    """Falling-factorial code: digit ``j`` counts the unused vertices below ``positions[j]``."""
    _check_tuple(x, n)
    p = x.positions
    ell = len(p)
    state_count(n, ell, Kind.LEP)
    r = 0
    for j, v in enumerate(p):
        digit = v - sum(1 for u in p[:j] if u < v)
        r = r * (n - j) + digit
    return r


def unrank_tuple(r, n, ell):
    total = state_count(n, ell, Kind.LEP)
    if not 0 <= r < total:
        raise ParameterError(f"rank {r} outside [0, {total})")
    digits = []
    for j in range(ell - 1, -1, -1):
        r, d = divmod(r, n - j)
        digits.append(d)
    digits.reverse()
    free = list(range(n))
    return TupleState(tuple(free.pop(d) for d in digits))


def enumerate_tuples(n, ell):
    total = state_count(n, ell, Kind.LEP)
    return [unrank_tuple(r, n, ell) for r in range(total)]


def uep_neighbors(s, n):
    """States reached by swapping one member for one non-member.

    Ordered by member index, then by the non-member vertex, which is the
    move numbering the simulation kernels use.
    """
    _check_subset(s, n)
    members = s.members
    outside = [v for v in range(n) if v not in members]
    out = []
    for a in range(len(members)):
        rest = members[:a] + members[a + 1:]
        for v in outside:
            out.append(SubsetState(tuple(sorted(rest + (v,)))))
    return out


def lep_neighbors(x, n):
    """Single-ball moves to empty vertices, then transpositions of ball pairs."""
    _check_tuple(x, n)
    p = x.positions
    ell = len(p)
    outside = [v for v in range(n) if v not in p]
    out = []
    for a in range(ell):
        for v in outside:
            out.append(TupleState(p[:a] + (v,) + p[a + 1:]))
    for a in range(ell):
        for b in range(a + 1, ell):
            q = list(p)
            q[a], q[b] = q[b], q[a]
            out.append(TupleState(tuple(q)))
    return out
