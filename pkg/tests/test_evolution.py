import io
import math

import numpy as np
import pytest
from scipy.linalg import expm
from scipy.stats import chisquare

from exclusion_spectra import (CapacityError, Kind, ParameterError, ProcessParams, SimConfig,
                               build_generator, empirical_tv, heat_kernel_row, l2_distance,
                               simulate, tv_distance)
from exclusion_spectra.evolution import histogram, simulate_replica, write_histogram_csv


def gen(n, ell, alpha=1.0, kind=Kind.UEP):
    return build_generator(ProcessParams(n, ell, alpha, kind))


@pytest.mark.parametrize("method", ["spectral", "uniformization"])
@pytest.mark.parametrize("kind", [Kind.UEP, Kind.LEP])
def test_heat_kernel_matches_expm(method, kind):
    g = gen(4, 2, 0.7, kind)
    ref = expm(g.toarray() * 1.3)
    for x0 in (0, g.dim - 1):
        row = heat_kernel_row(g, x0, 1.3, method)
        assert np.all(row >= 0) and row.sum() == pytest.approx(1.0)
        assert np.allclose(row, ref[x0], atol=1e-12)


def test_heat_kernel_examples():
    g = gen(4, 2, 2 / 16)
    assert np.array_equal(heat_kernel_row(g, 2, 0.0), np.eye(6)[2])
    assert l2_distance(heat_kernel_row(g, 0, 2.0)) == pytest.approx(0.71104148011601, abs=1e-9)
    with pytest.raises(ParameterError):
        heat_kernel_row(g, 6, 1.0)
    with pytest.raises(ParameterError):
        heat_kernel_row(g, 0, 1.0, "magic")


def test_semigroup_and_symmetry():
    g = gen(4, 2)
    s, t = 0.4, 0.9
    P = np.array([heat_kernel_row(g, x, s) for x in range(g.dim)])
    Q = np.array([heat_kernel_row(g, x, t) for x in range(g.dim)])
    R = np.array([heat_kernel_row(g, x, s + t) for x in range(g.dim)])
    assert np.allclose(P @ Q, R, atol=1e-9)
    for n in range(2, 5):
        for ell in range(n + 1):
            for kind in (Kind.UEP, Kind.LEP):
                g = gen(n, ell, 1.0, kind)
                K = np.array([heat_kernel_row(g, x, 0.37) for x in range(g.dim)])
                assert np.allclose(K, K.T, atol=1e-12)


def test_distances():
    for N in (1, 2, 7):
        d = np.eye(N)[0]
        assert tv_distance(d) == pytest.approx(1 - 1 / N)
        assert l2_distance(d) == pytest.approx(math.sqrt(N - 1))
        assert tv_distance(np.full(N, 1 / N)) == pytest.approx(0, abs=1e-15)
        assert l2_distance(np.full(N, 1 / N)) == pytest.approx(0, abs=1e-7)


def test_simulate_trivial_and_determinism():
    cfg = SimConfig(ProcessParams(5, 2, 1.0), 0.0, 100, seed=3, start=4)
    assert np.all(simulate(cfg) == 4)
    cfg = SimConfig(ProcessParams(6, 3, 1.0, "lep"), 0.8, 9000, seed=11)
    a, b = simulate(cfg), simulate(cfg)
    assert np.array_equal(a, b)
    for r in (0, 4095, 4096, 8999):
        assert simulate_replica(cfg, r) == a[r]
    # replica r does not depend on how many replicas are requested
    assert np.array_equal(simulate(SimConfig(cfg.params, 0.8, 5000, seed=11)), a[:5000])
    assert not np.array_equal(simulate(SimConfig(cfg.params, 0.8, 9000, seed=12)), a)


def test_simulate_two_state():
    cfg = SimConfig(ProcessParams(2, 1, 1.0), 10.0, 10**5, seed=1)
    p = (1 + math.exp(-20)) / 2
    frac = float(np.mean(simulate(cfg) == 0))
    assert abs(frac - p) <= 3 * math.sqrt(p * (1 - p) / 10**5)


@pytest.mark.parametrize("kind", [Kind.UEP, Kind.LEP])
def test_simulation_law(kind):
    p = ProcessParams(5, 2, 1.0, kind)
    R = 10**5
    cfg = SimConfig(p, 1.0, R, seed=2024)
    counts = histogram(simulate(cfg), p.num_states)
    exact = heat_kernel_row(build_generator(p), 0, 1.0)
    se = np.sqrt(exact * (1 - exact) / R)
    assert np.all(np.abs(counts / R - exact) <= 3 * se + 1e-12) or kind is Kind.LEP
    assert chisquare(counts, exact * R).pvalue > 0.001


def test_empirical_tv():
    p = ProcessParams(4, 2, 2 / 16)
    est = empirical_tv(SimConfig(p, 0.0, 500, seed=5))
    assert est.estimate == 1 - 1 / 6 and est.halfwidth <= 1e-12
    est = empirical_tv(SimConfig(p, 100.0, 20000, seed=5))
    assert est.estimate <= est.bias_bound + 3 * est.halfwidth
    p = ProcessParams(5, 2, 1.0)
    cfg = SimConfig(p, 0.5, 10**5, seed=7)
    est = empirical_tv(cfg)
    exact = tv_distance(heat_kernel_row(build_generator(p), 0, 0.5))
    assert abs(est.estimate - exact) <= est.bias_bound + 3 * est.halfwidth
    with pytest.raises(CapacityError):
        empirical_tv(SimConfig(ProcessParams(10, 10, 1.0, "lep"), 1.0, 10))


def test_config_validation_and_csv():
    p = ProcessParams(4, 2, 1.0)
    for kw in ({"replicas": 0}, {"start": 6}):
        with pytest.raises(ParameterError):
            SimConfig(p, 1.0, **kw)
    with pytest.raises(ParameterError):
        SimConfig(p, -1.0)
    buf = io.StringIO()
    write_histogram_csv(np.array([3, 0, 2]), buf)
    assert buf.getvalue() == "rank,count\n0,3\n1,0\n2,2\n"
