"""Time-t laws of the exclusion processes and Monte Carlo simulation.

The exact law is computed either from the eigenbasis or by
uniformization (Poisson-weighted powers of the jump kernel). The simulator
draws a Poisson number of jumps per replica at the constant total rate and
replays uniform neighbor choices through the compiled walk kernel.
"""
import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from . import kernels
from .errors import CapacityError, ParameterError
from .spectral import eigenbasis
from .state_index import Kind

#: Replicas sharing one random stream; replica ``r`` lives in chunk ``r // CHUNK``.
CHUNK = 4096
MAX_HISTOGRAM = 10**6
POISSON_TAIL = 1e-13


def heat_kernel_row(g, x0, t, method="spectral"):
    """Law of ``X_t`` started from state rank ``x0``, as a probability vector."""
    if not 0 <= x0 < g.dim:
        raise ParameterError(f"start state {x0} out of range")
    if t < 0:
        raise ParameterError(f"time must be nonnegative, got {t}")
    if t == 0:
        return np.eye(g.dim)[x0]
    if method == "spectral":
        b = eigenbasis(g)
        coeff = b.vectors[x0, :] * np.exp(-b.eigenvalues * t)
        p = b.vectors @ coeff
    elif method == "uniformization":
        p = _uniformized(g, x0, t)
    else:
        raise ParameterError(f"unknown method {method!r}")
    p = np.where(p < 0, 0.0, p)
    return p / p.sum()


def _uniformized(g, x0, t):
    rate = g.diagonal_rate
    p = np.zeros(g.dim)
    p[x0] = 1.0
    if rate == 0 or t == 0:
        return p
    # jump kernel: Q/rate + I has zero diagonal because the diagonal is constant
    P = g.tocsr() / rate
    P.setdiag(0.0)
    P.eliminate_zeros()
    mean = rate * t
    kmax = int(poisson.isf(POISSON_TAIL, mean)) + 1
    weights = poisson.pmf(np.arange(kmax + 1), mean)
    out = np.zeros(g.dim)
    v = p
    for k in range(kmax + 1):
        out += weights[k] * v
        v = P @ v
    return out


def l2_distance(d):
    """``sqrt(N * sum (d_s - 1/N)^2)``: L2 distance to the uniform law."""
    d = np.asarray(d, dtype=float)
    N = len(d)
    return float(math.sqrt(N * np.sum((d - 1.0 / N) ** 2)))


def tv_distance(d):
    # positive-part form: half the L1 distance, exact for point masses
    d = np.asarray(d, dtype=float)
    return float(np.clip(d - 1.0 / len(d), 0.0, None).sum())


@dataclass(frozen=True)
class SimConfig:
    params: object
    horizon: float
    replicas: int = 1
    seed: int = 0
    start: int = 0

    def __post_init__(self):
        if self.replicas < 1:
            raise ParameterError("replicas must be at least 1")
        if self.horizon < 0:
            raise ParameterError("horizon must be nonnegative")
        if not 0 <= self.start < self.params.num_states:
            raise ParameterError(f"start state {self.start} out of range")


def _walk(params):
    return kernels.uep_walk if params.kind is Kind.UEP else kernels.lep_walk


def _chunk(cfg, index, size, walk):
    p = cfg.params
    rng = np.random.default_rng([cfg.seed, index])
    deg = p.degree
    mean = p.alpha * deg * cfg.horizon
    jumps = rng.poisson(mean, size=size).astype(np.int64)
    if deg == 0:
        jumps[:] = 0
    choices = rng.integers(0, max(deg, 1), size=int(jumps.sum()), dtype=np.int64)
    return walk(p.n, p.ell, cfg.start, jumps, choices)


def simulate(cfg, backend=None):
    """Final state ranks of ``cfg.replicas`` independent runs up to ``cfg.horizon``.

    Deterministic in ``(seed, replica index)``; ``backend`` picks the kernel
    module (``"cython"`` or ``"python"``, default the active one).
    """
    mod = kernels.get_backend(backend)
    walk = mod.uep_walk if cfg.params.kind is Kind.UEP else mod.lep_walk
    out = np.empty(cfg.replicas, dtype=np.int64)
    for index, lo in enumerate(range(0, cfg.replicas, CHUNK)):
        hi = min(lo + CHUNK, cfg.replicas)
        out[lo:hi] = _chunk(cfg, index, CHUNK, walk)[: hi - lo]
    return out


def simulate_replica(cfg, r):
    """Final state of replica ``r`` alone; equals ``simulate(cfg)[r]``."""
    if not 0 <= r < cfg.replicas:
        raise ParameterError(f"replica {r} out of range")
    return int(_chunk(cfg, r // CHUNK, CHUNK, _walk(cfg.params))[r % CHUNK])


def histogram(ranks, dim):
    return np.bincount(ranks, minlength=dim)


def write_histogram_csv(counts, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["rank", "count"])
    for r, c in enumerate(counts.tolist()):
        w.writerow([r, c])


@dataclass(frozen=True)
class TVEstimate:
    """Plug-in TV distance to uniform with a bootstrap 95% halfwidth.

    ``bias_bound`` is ``sqrt(N-1) / (2 sqrt(replicas))``, an upper bound on
    the (always nonnegative) bias of the plug-in estimate.
    """

    estimate: float
    halfwidth: float
    bias_bound: float
    replicas: int
    dim: int

    def to_dict(self):
        return {"tv": self.estimate, "halfwidth": self.halfwidth,
                "bias_bound": self.bias_bound, "replicas": self.replicas, "dim": self.dim}


def empirical_tv(cfg, n_boot=200, ranks=None):
    dim = cfg.params.num_states
    if dim > MAX_HISTOGRAM:
        raise CapacityError(f"cannot histogram {dim} states")
    if ranks is None:
        ranks = simulate(cfg)
    counts = histogram(ranks, dim)
    R = len(ranks)
    est = tv_distance(counts / R)
    rng = np.random.default_rng([cfg.seed, 2**32 - 1])
    boot = rng.multinomial(R, counts / R, size=n_boot) / R
    tvs = np.clip(boot - 1.0 / dim, 0.0, None).sum(axis=1)
    halfwidth = 1.96 * float(tvs.std(ddof=1)) if n_boot > 1 else 0.0
    bias = math.sqrt(dim - 1) / (2 * math.sqrt(R))
    return TVEstimate(est, halfwidth, bias, R, dim)
