"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py --repeat 3
"""
import argparse
import time

import numpy as np

from exclusion_spectra import Kind, ProcessParams, SimConfig, simulate
from exclusion_spectra import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(replicas):
    """``(label, fn)`` pairs; ``fn`` takes a backend name."""
    yield "uep_offdiag(16, 8)", lambda b: kernels.get_backend(b).uep_offdiag(16, 8)
    yield "lep_offdiag(7, 6)", lambda b: kernels.get_backend(b).lep_offdiag(7, 6)
    for kind, n, ell in [(Kind.UEP, 50, 20), (Kind.LEP, 8, 5)]:
        cfg = SimConfig(ProcessParams(n, ell, 2 / n**2, kind), 0.25 * n * np.log(n), replicas, seed=1)
        yield f"simulate {kind.value}({n}, {ell}) x{replicas}", lambda b, cfg=cfg: simulate(cfg, b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--replicas", type=int, default=20000)
    args = ap.parse_args(argv)
    if "cython" not in kernels.BACKENDS:
        raise SystemExit("compiled extension not built; run pip install -e . first")
    print(f"{'case':38s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in cases(args.replicas):
        tp, a = best_of(lambda: fn("python"), args.repeat)
        tc, b = best_of(lambda: fn("cython"), args.repeat)
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) \
            else np.array_equal(a, b)
        assert same, f"backends disagree on {name}"
        print(f"{name:38s} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
