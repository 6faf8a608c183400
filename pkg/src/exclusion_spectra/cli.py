"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 parameter error,
3 capacity error.
"""
import argparse
import json
import math
import sys
from contextlib import contextmanager
from math import comb

import numpy as np

from . import evolution, mixing, spectral
from .errors import CapacityError, ParameterError
from .generator import build_generator, write_coo_text
from .lifts import verify_lift_lemmas
from .report import Report
from .state_index import Kind, ProcessParams


def parse_grid(text):
    """``start:stop:step`` (endpoints inclusive within half a step) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ParameterError(f"grid {text!r} is not start:stop:step")
        start, stop, step = map(float, parts)
        if step <= 0:
            raise ParameterError("grid step must be positive")
        count = int(math.floor((stop - start) / step + 0.5)) + 1
        return [start + k * step for k in range(max(count, 0))]
    return [float(x) for x in text.split(",") if x.strip()]


def _params(args, kind=None):
    alpha = args.alpha if args.alpha is not None else mixing.standard_alpha(args.n)
    return ProcessParams(args.n, args.ell, alpha, kind or args.kind)


@contextmanager
def _output(args):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            yield fh
    else:
        yield sys.stdout


def _emit_json(args, obj):
    with _output(args) as fh:
        fh.write(json.dumps(obj, indent=2) + "\n")


def cmd_spectrum(args):
    p = _params(args)
    use_oracle = args.oracle or p.kind is Kind.LEP or 2 * p.ell > p.n
    if use_oracle:
        s = spectral.brute_force_spectrum(build_generator(p), args.cluster_tol)
    else:
        s = spectral.uep_spectrum_closed_form(p)
    out = s.to_dict()
    status = 0
    if args.verify:
        if p.kind is not Kind.UEP:
            raise ParameterError("--verify compares the closed form, which needs kind=uep")
        closed = spectral.uep_spectrum_closed_form(p)
        oracle = spectral.brute_force_spectrum(build_generator(p), args.cluster_tol)
        match = len(closed.pairs) == len(oracle.pairs) and all(
            a[1] == b[1] for a, b in zip(closed.pairs, oracle.pairs))
        dev = (float(np.abs(closed.values - oracle.values).max())
               if len(closed.pairs) == len(oracle.pairs) else math.inf)
        out["max_dev"] = dev
        out["multiplicities_match"] = match
        status = 0 if match and dev < 1e-8 * max(1.0, p.alpha * p.n**2) else 1
    _emit_json(args, out)
    return status


def cmd_envelope(args):
    p = _params(args, Kind.LEP)
    env = spectral.envelope(p.n, p.ell, p.alpha)
    out = {"n": p.n, "ell": p.ell, "alpha": p.alpha, "values": list(env.values)}
    status = 0
    if args.check:
        s = spectral.brute_force_spectrum(build_generator(p))
        contained = env.covers(s.values, 1e-6 * max(1.0, p.alpha * p.n**2))
        out["spectrum"] = s.to_dict()["pairs"]
        out["contained"] = contained
        ok = contained
        if p.ell == p.n:
            core = spectral.symmetric_core(env, p.alpha * comb(p.n, 2))
            in_core = core.covers(s.values, 1e-6 * max(1.0, p.alpha * p.n**2))
            out["symmetric_core"] = list(core.values)
            out["core_contains_spectrum"] = in_core
            ok = ok and in_core
        status = 0 if ok else 1
    _emit_json(args, out)
    return status


def cmd_l2(args):
    if (args.c_grid is None) == (args.t_grid is None):
        raise ParameterError("give exactly one of --c-grid and --t-grid")
    curve = mixing.l2_curve(
        args.n, args.ell, args.kind,
        c_grid=parse_grid(args.c_grid) if args.c_grid else None,
        t_grid=parse_grid(args.t_grid) if args.t_grid else None,
        approximate=args.approx)
    if curve.approximate:
        print("warning: labelled-process curve uses the spectral-gap term only "
              "(approximate)", file=sys.stderr)
    if args.format == "csv":
        with _output(args) as fh:
            curve.write_csv(fh)
    else:
        _emit_json(args, curve.to_dict())
    return 0


def cmd_mix(args):
    rep = mixing.tau2(args.n, args.ell, args.kind, args.epsilon, approximate=args.approx)
    out = rep.to_dict()
    out["reference_time"] = mixing.time_from_offset(args.n, args.ell, args.kind, 0.0)
    _emit_json(args, out)
    return 0


def cmd_sandwich(args):
    rep = mixing.sandwich_check(args.n, args.ell, args.kind, parse_grid(args.c_grid),
                                upper_floor=args.upper_floor, eps=args.eps,
                                scan_threshold=args.scan_threshold)
    out = {"n": args.n, "ell": args.ell, "kind": Kind.parse(args.kind).value,
           "passed": rep.passed, "checks": [c.line() for c in rep.checks]}
    out.update(rep.data)
    _emit_json(args, out)
    return 0 if rep.passed else 1


def cmd_simulate(args):
    p = _params(args)
    cfg = evolution.SimConfig(p, args.t, args.replicas, args.seed, args.start)
    ranks = evolution.simulate(cfg)
    counts = evolution.histogram(ranks, p.num_states)
    if args.format == "csv":
        with _output(args) as fh:
            evolution.write_histogram_csv(counts, fh)
        return 0
    out = {"n": p.n, "ell": p.ell, "alpha": p.alpha, "kind": p.kind.value, "t": args.t,
           "seed": args.seed, "replicas": args.replicas, "start": args.start}
    out.update(evolution.empirical_tv(cfg, ranks=ranks).to_dict())
    if args.exact:
        out["exact_tv"] = evolution.tv_distance(
            evolution.heat_kernel_row(build_generator(p), args.start, args.t))
    _emit_json(args, out)
    return 0


def cmd_dump(args):
    g = build_generator(_params(args))
    with _output(args) as fh:
        write_coo_text(g, fh)
    return 0


def run_verify(max_n):
    """Small-size assertion battery; returns a list of reports."""
    reports = []

    r = Report("closed-form vs oracle spectrum (unlabelled)")
    for n in range(2, max_n + 1):
        for ell in range(n // 2 + 1):
            for alpha in (1.0, mixing.standard_alpha(n)):
                p = ProcessParams(n, ell, alpha, Kind.UEP)
                closed = spectral.uep_spectrum_closed_form(p)
                oracle = spectral.brute_force_spectrum(build_generator(p))
                same = len(closed.pairs) == len(oracle.pairs)
                dev = float(np.abs(closed.values - oracle.values).max()) if same else math.inf
                ok = same and dev <= 1e-8 * max(1.0, alpha * n * n) and all(
                    a[1] == b[1] for a, b in zip(closed.pairs, oracle.pairs))
                r.add(f"n={n} ell={ell} alpha={alpha:g}", ok, f"max dev {dev:.2g}")
    reports.append(r)

    r = Report("labelled spectrum: envelope, symmetric core, multiplicities")
    for n in range(1, max_n + 1):
        spectra = [spectral.brute_force_spectrum(build_generator(ProcessParams(n, ell, 1.0, Kind.LEP)))
                   for ell in range(n + 1)]
        for ell, s in enumerate(spectra):
            env = spectral.envelope(n, ell, 1.0)
            r.add(f"containment n={n} ell={ell}", env.covers(s.values, 1e-6))
            if ell == n:
                core = spectral.symmetric_core(env, comb(n, 2))
                r.add(f"symmetric core n={n}", core.covers(s.values, 1e-6))
            if ell < n:
                r.extend(spectral.multiplicity_checks(s, 1e-6, spectra[ell + 1]))
    reports.append(r)

    r = Report("lift lemmas")
    for n in range(1, max_n + 1):
        for ell in range(n):
            r.extend(verify_lift_lemmas(n, ell, 1.0, 1e-9))
    reports.append(r)

    r = Report("coefficient lemma C_j(x)^2 = m_j / N")
    for n in range(1, max_n + 1):
        for ell in range(n + 1):
            for kind in (Kind.UEP, Kind.LEP):
                g = build_generator(ProcessParams(n, ell, 1.0, kind))
                cr = mixing.verify_coefficient_lemma(g, 1e-9)
                r.add(f"{kind.value} n={n} ell={ell}", cr.passed, f"max dev {cr.max_deviation:.2g}")
    reports.append(r)

    r = Report("exact L2 formula vs heat kernel")
    for n in range(2, max_n + 1):
        for ell in range(1, n // 2 + 1):
            g = build_generator(ProcessParams(n, ell, mixing.standard_alpha(n), Kind.UEP))
            for t in (0.1, 1.0, 5.0, 20.0):
                d = evolution.l2_distance(evolution.heat_kernel_row(g, 0, t))
                exact = mixing.uep_l2_exact(n, ell, t)
                r.add(f"n={n} ell={ell} t={t:g}", abs(d - exact) <= 1e-8, f"diff {abs(d - exact):.2g}")
    reports.append(r)

    r = Report("L2 sandwich")
    n = 10**4
    r.extend(mixing.sandwich_check(n, n // 2, Kind.UEP))
    for ell in (10, 100, int(0.45 * n)):
        r.extend(mixing.sandwich_check(n, ell, Kind.LEP))
    for m in range(2, max_n + 1):
        for ell in range(1, m // 2 + 1):
            r.extend(mixing.sandwich_check(m, ell, Kind.UEP, (-1.0, 0.0, 1.0)))
    reports.append(r)
    return reports


def cmd_verify(args):
    reports = run_verify(args.max_n)
    with _output(args) as fh:
        if args.format == "json":
            fh.write(json.dumps([
                {"title": rep.title, "passed": rep.passed,
                 "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                            for c in rep.checks]}
                for rep in reports], indent=2) + "\n")
        else:
            for rep in reports:
                fh.write(f"{'PASS' if rep.passed else 'FAIL'}  {rep.title}  "
                         f"({sum(c.passed for c in rep.checks)}/{len(rep.checks)})\n")
                for c in rep.violations:
                    fh.write(f"    {c.line()}\n")
    return 0 if all(rep.passed for rep in reports) else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="exclusion-spectra",
        description="Spectra and L2 mixing of exclusion and interchange processes on K_n.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kind=True):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--ell", type=int, required=True)
        p.add_argument("--alpha", type=float, default=None, help="edge rate (default 2/n^2)")
        if kind:
            p.add_argument("--kind", type=str.lower, choices=["uep", "lep"], default="uep")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("spectrum", help="eigenvalues of -Q with multiplicities")
    common(p)
    p.add_argument("--oracle", action="store_true", help="dense eigensolver instead of closed form")
    p.add_argument("--verify", action="store_true", help="compare closed form with the oracle")
    p.add_argument("--cluster-tol", type=float, default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("envelope", help="admissible eigenvalues of the labelled process")
    common(p, kind=False)
    p.add_argument("--check", action="store_true", help="verify containment with the oracle")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("l2", help="L2 distance curve")
    common(p)
    p.add_argument("--c-grid", default=None, help="offsets, start:stop:step or a,b,c")
    p.add_argument("--t-grid", default=None, help="times, start:stop:step or a,b,c")
    p.add_argument("--approx", action="store_true", help="labelled: spectral-gap term only")
    p.set_defaults(func=cmd_l2)

    p = sub.add_parser("mix", help="L2 mixing time tau_2(epsilon)")
    common(p)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--approx", action="store_true")
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("sandwich", help="check e^-2c <= L2 <= 2e^-2c on a c grid")
    common(p)
    p.add_argument("--c-grid", default="0,0.5,1,2")
    p.add_argument("--upper-floor", type=int, default=1000)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--scan-threshold", action="store_true")
    p.set_defaults(func=cmd_sandwich)

    p = sub.add_parser("simulate", help="Monte Carlo endpoints and empirical TV")
    common(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--replicas", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="also report the exact TV distance")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("dump", help="write the generator as 'row col value' text")
    common(p)
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("verify", help="run the small-size verification battery")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
