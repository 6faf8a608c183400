"""Acceptance suite: one PASS/FAIL line per criterion at the stated tolerances.

Run ``python tests/test_acceptance.py`` for the table alone, or through
pytest (``-s`` shows the lines). Criteria are evaluated as stated; a failing
line is a failing claim, not a loosened one.
"""
import math
import time
from math import comb, perm

import numpy as np
import pytest
from scipy.stats import chisquare

from exclusion_spectra import (Kind, ProcessParams, SimConfig, brute_force_spectrum,
                               build_generator, empirical_tv, envelope, heat_kernel_row,
                               l2_distance, sandwich_check, simulate, symmetric_core, tau2,
                               tv_distance, uep_l2_exact, uep_spectrum_closed_form,
                               verify_coefficient_lemma, verify_lift_lemmas)
from exclusion_spectra.evolution import histogram
from exclusion_spectra.mixing import asymptotic_profile, time_from_offset, uep_l2_squared
from exclusion_spectra.spectral import band_limits


def _lep_oracle(n, ell):
    return brute_force_spectrum(build_generator(ProcessParams(n, ell, 1.0, Kind.LEP)))


def criterion_1():
    start = time.perf_counter()
    bad = []
    for n in range(2, 9):
        for ell in range(n // 2 + 1):
            p = ProcessParams(n, ell, 1.0, Kind.UEP)
            closed = uep_spectrum_closed_form(p)
            orc = brute_force_spectrum(build_generator(p))
            same = closed.multiplicities.tolist() == orc.multiplicities.tolist()
            if not same or np.abs(closed.values - orc.values).max() > 1e-8:
                bad.append((n, ell))
    elapsed = time.perf_counter() - start
    return not bad and elapsed < 30, f"mismatches {bad}, {elapsed:.2f}s (< 30s)"


def criterion_2a():
    bad = [(n, ell) for n in range(2, 6) for ell in range(n + 1)
           if not envelope(n, ell).covers(_lep_oracle(n, ell).values, 1e-6)]
    return not bad, f"containment failures {bad}"


def criterion_2b():
    bad = []
    for n in range(2, 6):
        core = symmetric_core(envelope(n, n), comb(n, 2))
        if not core.covers(_lep_oracle(n, n).values, 1e-6):
            bad.append(n)
    return not bad, f"symmetric-core failures at n={bad}"


def criterion_2c():
    bad = []
    for n in range(2, 6):
        for ell in range(n + 1):
            got = _lep_oracle(n, ell).multiplicity_of(n, 1e-6)
            if got != ell * (n - 1):
                bad.append(f"(n={n}, ell={ell}): {got} != {ell * (n - 1)}")
    return not bad, "mult(n) == ell(n-1) failures: " + ("; ".join(bad) or "none")


def criterion_2d():
    bad = []
    for n in range(2, 6):
        for ell in range(n + 1):
            s = _lep_oracle(n, ell)
            for j in range(1, min(ell, n - ell) + 1):
                lo, hi = band_limits(n, j, 1.0)
                inside = sum(m for v, m in s.pairs if lo - 1e-6 <= v < hi - 1e-6)
                if inside > perm(n, j) * comb(ell, j):
                    bad.append((n, ell, j))
    return not bad, f"band-bound failures {bad}"


def criterion_3():
    bad = []
    for n in range(1, 6):
        for ell in range(n):
            rep = verify_lift_lemmas(n, ell, 1.0, 1e-9)
            bad.extend(c.name for c in rep.violations)
    return not bad, f"violations {bad}"


def criterion_4():
    worst = 0.0
    for n in range(4, 9):
        for ell in range(n // 2 + 1):
            g = build_generator(ProcessParams(n, ell, 2 / n**2, Kind.UEP))
            for t in (0.1, 1, 5, 20):
                d = l2_distance(heat_kernel_row(g, 0, t))
                worst = max(worst, abs(d - uep_l2_exact(n, ell, t)))
    return worst <= 1e-8, f"max |closed form - heat kernel| = {worst:.2e} (<= 1e-8)"


def criterion_5():
    start = time.perf_counter()
    n, grid = 10**4, (0, 0.5, 1, 2)
    reps = [sandwich_check(n, n // 2, Kind.UEP, grid, upper_floor=1000, slack=1.05)]
    reps += [sandwich_check(n, ell, Kind.LEP, grid) for ell in (10, 100, int(0.45 * n))]
    elapsed = time.perf_counter() - start
    bad = [f"{r.title}: {c.name}" for r in reps for c in r.violations]
    return not bad and elapsed < 1, f"violations {bad}, {elapsed:.3f}s (< 1s)"


def criterion_6():
    n = 1000
    ref = 0.25 * n * math.log(n - 1)
    ratio = tau2(n, n // 2, Kind.UEP, 0.25).tau2 / ref
    return 0.97 <= ratio <= 1.03, f"tau2 / ((1/4) n log(n-1)) = {ratio:.4f}, window [0.97, 1.03]"


def criterion_7():
    n, rows = 2000, []
    for c in (0, 0.5, 1):
        t = time_from_offset(n, n // 2, Kind.UEP, c)
        rows.append(uep_l2_squared(n, n // 2, t) / asymptotic_profile(c))
        rows.append(uep_l2_squared(n, 2, t) / asymptotic_profile(c, 2))
    worst = max(abs(r - 1) for r in rows)
    return worst <= 0.05, f"max relative deviation {worst:.4f} (<= 0.05)"


def criterion_8():
    cases = [(4, 2, Kind.UEP), (5, 2, Kind.UEP), (4, 2, Kind.LEP), (4, 3, Kind.LEP)]
    worst = max(verify_coefficient_lemma(build_generator(ProcessParams(n, ell, 1.0, k))).max_deviation
                for n, ell, k in cases)
    return worst < 1e-9, f"max |C_j(x)^2 - m_j/N| = {worst:.2e} (< 1e-9)"


def criterion_9():
    p = ProcessParams(5, 2, 1.0, Kind.UEP)
    cfg = SimConfig(p, 1.0, 10**5, seed=20240601)
    ranks = simulate(cfg)
    exact = heat_kernel_row(build_generator(p), 0, 1.0)
    pvalue = chisquare(histogram(ranks, p.num_states), exact * cfg.replicas).pvalue
    est = empirical_tv(cfg, ranks=ranks)
    gap = abs(est.estimate - tv_distance(exact))
    allowed = est.bias_bound + 3 * est.halfwidth
    return pvalue > 0.001 and gap <= allowed, \
        f"chi-squared p = {pvalue:.3g} (> 0.001); |TV - exact| = {gap:.2e} <= {allowed:.2e}"


CRITERIA = [
    ("1 closed-form spectrum vs oracle, n<=8", criterion_1),
    ("2a envelope containment, n<=5", criterion_2a),
    ("2b symmetric core at full occupancy", criterion_2b),
    ("2c multiplicity of eigenvalue n is ell(n-1)", criterion_2c),
    ("2d band multiplicity bounds", criterion_2d),
    ("3 lift lemmas, n<=5", criterion_3),
    ("4 exact L2 formula vs heat kernel", criterion_4),
    ("5 L2 sandwich at n=10^4", criterion_5),
    ("6 tau2 location at n=1000", criterion_6),
    ("7 limit profile at n=2000", criterion_7),
    ("8 coefficient identity", criterion_8),
    ("9 simulation fidelity", criterion_9),
]


def report(label, fn):
    ok, detail = fn()
    print(f"{'PASS' if ok else 'FAIL'}  criterion {label}: {detail}")
    return ok, detail


@pytest.mark.parametrize("label,fn", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(label, fn):
    ok, detail = report(label, fn)
    assert ok, detail


if __name__ == "__main__":
    results = [report(label, fn)[0] for label, fn in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
