import numpy as np
import pytest

from exclusion_spectra import Kind, ProcessParams, SimConfig, simulate
from exclusion_spectra import kernels
from exclusion_spectra import _kernels_py as pure

compiled = pytest.importorskip("exclusion_spectra._kernels")


def test_active_backend():
    assert kernels.BACKEND in kernels.BACKENDS
    assert kernels.get_backend("python") is pure
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.parametrize("name", ["uep_offdiag", "lep_offdiag"])
@pytest.mark.parametrize("n", range(1, 7))
def test_offdiag_parity(name, n):
    for ell in range(n + 1):
        a = getattr(pure, name)(n, ell)
        b = getattr(compiled, name)(n, ell)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))


@pytest.mark.parametrize("kind", [Kind.UEP, Kind.LEP])
@pytest.mark.parametrize("n,ell", [(2, 1), (5, 2), (7, 3), (7, 7), (12, 5)])
def test_walk_parity(kind, n, ell):
    cfg = SimConfig(ProcessParams(n, ell, 1.0, kind), 2.5, 5000, seed=n * 100 + ell)
    assert np.array_equal(simulate(cfg, "python"), simulate(cfg, "cython"))


def test_walk_edge_inputs():
    rng = np.random.default_rng(0)
    jumps = np.array([0, 3, 0, 1], dtype=np.int64)
    choices = rng.integers(0, 4, size=4, dtype=np.int64)
    for walk in ("uep_walk", "lep_walk"):
        a = getattr(pure, walk)(4, 2, 5, jumps, choices)
        b = getattr(compiled, walk)(4, 2, 5, jumps, choices)
        assert np.array_equal(a, b) and a[0] == 5 and a[2] == 5


@pytest.mark.parametrize("backend", [pure, compiled])
@pytest.mark.parametrize("start,jumps,choices", [
    (6, [1], [0]),            # start rank past the last state
    (0, [-1, 2], [0]),        # negative jump count
    (0, [2], [0]),            # too few choices
    (0, [1], [4]),            # choice past the move count
    (0, [1], [-1]),
])
def test_walk_rejects_bad_inputs(backend, start, jumps, choices):
    with pytest.raises(ValueError):
        backend.uep_walk(4, 2, start, np.array(jumps, dtype=np.int64),
                         np.array(choices, dtype=np.int64))
