"""L2 distance from stationarity and L2 mixing times.

Time is in the standard scaling ``alpha = 2/n**2`` (one state change per
unit time on average). Offsets ``c`` are defined through
``t = (n/4) log(scale) + c n`` with ``scale = n - 1`` for the unlabelled
process and ``ell (n - 1)`` for the labelled one.
"""
import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import ParameterError
from .generator import build_lep_generator
from .report import Report
from .spectral import brute_force_spectrum, cluster_eigenvalues, eigenbasis
from .state_index import Kind, ProcessParams

#: Log-domain cutoff below which L2 terms are dropped (about 1e-300).
LOG_TINY = -690.0


def standard_alpha(n):
    return 2.0 / n**2


def offset_scale(n, ell, kind):
    return n - 1 if Kind.parse(kind) is Kind.UEP else ell * (n - 1)


def time_from_offset(n, ell, kind, c):
    return 0.25 * n * math.log(offset_scale(n, ell, kind)) + c * n


def offset_from_time(n, ell, kind, t):
    return (t - 0.25 * n * math.log(offset_scale(n, ell, kind))) / n


def _uep_log_multiplicities(n, ell):
    i = np.arange(1, ell + 1, dtype=float)
    # C(n,i) - C(n,i-1) = C(n,i) * (1 - i/(n-i+1))
    logm = gammaln(n + 1) - gammaln(i + 1) - gammaln(n - i + 1) + np.log1p(-i / (n - i + 1))
    return i, logm


def uep_l2_squared(n, ell, t):
    """Squared L2 distance of the unlabelled process at time ``t`` (scalar)."""
    if ell == 0:
        return 0.0
    i, logm = _uep_log_multiplicities(n, ell)
    logs = logm - 4.0 * i * (n - i + 1) * t / n**2
    logs = logs[logs > LOG_TINY]
    return float(np.exp(logsumexp(logs))) if len(logs) else 0.0


def uep_l2_exact(n, ell, t):
    """Exact L2 distance ``sqrt(sum_i (C(n,i)-C(n,i-1)) exp(-4 i (n-i+1) t / n^2))``."""
    ProcessParams(n, ell, 1.0, Kind.UEP).require_half()
    if t < 0:
        raise ParameterError(f"time must be nonnegative, got {t}")
    return math.sqrt(uep_l2_squared(n, ell, t))


def l2_from_spectrum(s, t, zero_tol=None):
    """``sqrt(sum_j m_j exp(-2 lambda_j t))`` over the nonzero eigenvalues of ``s``."""
    if zero_tol is None:
        zero_tol = 1e-9 * max(1.0, s.alpha * s.n**2)
    vals = np.array([v for v, _ in s.pairs if abs(v) > zero_tol])
    mult = np.array([m for v, m in s.pairs if abs(v) > zero_tol], dtype=float)
    if len(vals) == 0:
        return 0.0
    return float(np.sqrt(np.exp(logsumexp(np.log(mult) - 2.0 * vals * t))))


def lep_first_term(n, ell, t):
    """Contribution ``ell (n-1) exp(-4t/n)`` of the spectral gap alone, as a distance."""
    return math.sqrt(ell * (n - 1) * math.exp(-4.0 * t / n))


def lep_band_upper(n, ell, t):
    """Band-wise multiplicity bound ``sum_j C(ell,j) (n)_j exp(-4 j (n-j+1) t / n^2)``, as a distance."""
    j = np.arange(1, min(ell, n - ell) + 1, dtype=float)
    if len(j) == 0:
        return 0.0
    logs = (gammaln(ell + 1) - gammaln(j + 1) - gammaln(ell - j + 1)
            + gammaln(n + 1) - gammaln(n - j + 1) - 4.0 * j * (n - j + 1) * t / n**2)
    return float(np.sqrt(np.exp(logsumexp(logs))))


def distance_function(n, ell, kind, approximate=False):
    """Return ``(f, approximate)`` where ``f(t)`` is the L2 distance at time ``t``.

    Unlabelled: the exact closed form. Labelled: the oracle spectrum (small
    state spaces only) or, with ``approximate=True``, the spectral-gap term.
    """
    kind = Kind.parse(kind)
    if kind is Kind.UEP:
        ProcessParams(n, ell, 1.0, kind).require_half()
        return (lambda t: math.sqrt(uep_l2_squared(n, ell, t))), False
    ProcessParams(n, ell, 1.0, kind)
    if approximate:
        return (lambda t: lep_first_term(n, ell, t)), True
    s = brute_force_spectrum(build_lep_generator(ProcessParams(n, ell, standard_alpha(n), kind)))
    return (lambda t: l2_from_spectrum(s, t)), False


@dataclass
class L2Curve:
    n: int
    ell: int
    kind: str
    approximate: bool
    samples: list = field(default_factory=list)

    HEADER = ("t", "c", "l2", "lower", "upper")

    def write_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(self.HEADER)
        for row in self.samples:
            w.writerow([repr(float(x)) for x in row])

    def to_dict(self):
        return {
            "n": self.n, "ell": self.ell, "kind": self.kind, "alpha": standard_alpha(self.n),
            "approximate": self.approximate,
            "samples": [dict(zip(self.HEADER, map(float, row))) for row in self.samples],
        }


def l2_curve(n, ell, kind="UEP", c_grid=None, t_grid=None, approximate=False):
    """Evaluate the L2 distance with its ``e^{-2c}`` / ``2e^{-2c}`` reference lines."""
    if (c_grid is None) == (t_grid is None):
        raise ParameterError("give exactly one of c_grid and t_grid")
    kind = Kind.parse(kind)
    f, approx = distance_function(n, ell, kind, approximate)
    if c_grid is not None:
        points = [(time_from_offset(n, ell, kind, c), c) for c in c_grid]
    else:
        points = [(t, offset_from_time(n, ell, kind, t)) for t in t_grid]
    curve = L2Curve(n, ell, kind.value, approx)
    for t, c in points:
        curve.samples.append((t, c, f(t), math.exp(-2 * c), 2 * math.exp(-2 * c)))
    return curve


@dataclass
class MixingReport:
    n: int
    ell: int
    kind: str
    epsilon: float
    tau2: float
    tol: float
    bracket: tuple

    def to_dict(self):
        return {"n": self.n, "ell": self.ell, "kind": self.kind,
                "epsilon": self.epsilon, "tau2": self.tau2, "tol": self.tol}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def tau2(n, ell, kind="UEP", epsilon=0.25, tol=None, approximate=False):
    """First time the L2 distance is at most ``2*epsilon``, by bisection."""
    if not 0 < epsilon < 1:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    kind = Kind.parse(kind)
    f, _ = distance_function(n, ell, kind, approximate)
    if tol is None:
        tol = 1e-9 * n * math.log(max(n, 2))
    target = 2 * epsilon * (1 + 1e-12)
    if f(0.0) <= target:
        return MixingReport(n, ell, kind.value, epsilon, 0.0, tol, (0.0, 0.0))
    lo = 0.0
    hi = max(time_from_offset(n, ell, kind, 1.0), 1.0)
    while f(hi) > target:
        lo, hi = hi, 2 * hi
    bracket = (lo, hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) <= target:
            hi = mid
        else:
            lo = mid
    return MixingReport(n, ell, kind.value, epsilon, hi, tol, bracket)


def lep_size_threshold(eps):
    """Vertex count beyond which the labelled upper bound is proven, for ``ell <= (1-eps) n/2``."""
    return max(8000.0, math.exp((math.log(2) + 1 - math.log(1 - eps)) / eps))


def sandwich_check(n, ell, kind="UEP", c_grid=(0.0, 0.5, 1.0, 2.0), upper_floor=1000,
                   slack=1.05, eps=0.1, scan_threshold=False):
    """Check ``e^{-2c} <= L2(t) <= 2 e^{-2c}`` at ``t = (n/4) log(scale) + c n``.

    Unlabelled: both sides against the exact formula; the upper side (with
    ``slack``) only for ``c >= 0`` and ``n >= upper_floor``. Labelled: the
    lower side against the spectral-gap term, which bounds the distance from
    below; the band-wise upper estimate is recorded but not asserted.
    """
    kind = Kind.parse(kind)
    report = Report(f"sandwich {kind.value} n={n} ell={ell}")
    rows = []
    if kind is Kind.UEP:
        ProcessParams(n, ell, 1.0, kind).require_half()
    elif 2 * ell > (1 - eps) * n:
        report.data["note"] = f"ell exceeds (1-eps) n/2 for eps={eps}"
    for c in c_grid:
        t = time_from_offset(n, ell, kind, c)
        lower = math.exp(-2 * c)
        if kind is Kind.UEP:
            value = math.sqrt(uep_l2_squared(n, ell, t))
        else:
            value = lep_first_term(n, ell, t)
        row = {"c": c, "t": t, "l2": value, "lower": lower, "upper": 2 * lower}
        report.add(f"lower c={c:g}", value >= lower * (1 - 1e-12), f"{value:.6g} >= {lower:.6g}")
        if kind is Kind.UEP and c >= 0 and n >= upper_floor:
            report.add(f"upper c={c:g}", value <= 2 * lower * slack,
                       f"{value:.6g} <= {2 * lower * slack:.6g}")
        if kind is Kind.LEP:
            row["band_upper_estimate"] = lep_band_upper(n, ell, t)
        rows.append(row)
    report.data["rows"] = rows
    if kind is Kind.LEP:
        report.data["lep_size_threshold"] = lep_size_threshold(eps)
    if scan_threshold and kind is Kind.UEP:
        report.data["upper_threshold_n"] = _uep_upper_threshold(n, ell, c_grid, slack)
    return report


def _uep_upper_threshold(n, ell, c_grid, slack):
    """Smallest ``m`` such that the upper bound holds on the grid for every size in ``[m, n]``.

    Smaller sizes keep ``ell/n`` fixed (capped at ``m/2``).
    """
    cs = [c for c in c_grid if c >= 0]
    first_ok = n + 1
    for m in range(n, 1, -1):
        k = min(max(1, round(ell * m / n)), m // 2)
        for c in cs:
            t = time_from_offset(m, k, Kind.UEP, c)
            if math.sqrt(uep_l2_squared(m, k, t)) > 2 * math.exp(-2 * c) * slack:
                return first_ok
        first_ok = m
    return first_ok


def asymptotic_profile(c, ell=None):
    """Large-``n`` limit of the squared unlabelled L2 distance at offset ``c``.

    ``exp(exp(-4c)) - 1`` when the ball count grows too; for a fixed ball
    count ``ell`` the truncated series ``sum_{i<=ell} exp(-4ci)/i!``.
    """
    x = math.exp(-4 * c)
    if ell is None:
        return math.expm1(x)
    return sum(x**i / math.factorial(i) for i in range(1, ell + 1))


@dataclass
class CoefficientReport:
    """Per distinct eigenvalue: ``(lambda_j, m_j, max_x |C_j(x)^2 - m_j/N|)``."""

    dim: int
    table: list
    tol: float

    @property
    def max_deviation(self):
        return max((d for _, _, d in self.table), default=0.0)

    @property
    def passed(self):
        return self.max_deviation <= self.tol


def verify_coefficient_lemma(g, tol=1e-9):
    """Squared projections of each unit vector onto each eigenspace, against ``m_j / N``."""
    basis = eigenbasis(g)
    ev = basis.eigenvalues
    N = g.dim
    groups = cluster_eigenvalues(ev, 1e-6 * max(g.params.alpha * g.params.n**2, 1e-300))
    table = []
    start = 0
    for value, mult in groups:
        block = basis.vectors[:, start:start + mult]
        weights = (block**2).sum(axis=1)
        table.append((value, mult, float(np.abs(weights - mult / N).max())))
        start += mult
    return CoefficientReport(N, table, tol)

