"""Command-line front door.

Subcommands: hunt-resonance, hunt-dio, hunt-thm3, chen-verify,
resonator-ratio, prime-stats, envelope.  Identical argv and spec files
produce byte-identical CSV output for any --threads value (exit 0 success,
2 validation error, 1 runtime error).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import diophantine as dio
from . import hunter, lfunc, resonator
from .parallel import resolve_threads


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _load_spec_arg(args) -> lfunc.LFunctionSpec:
    if args.spec is None:
        return lfunc.zeta_spec()
    return lfunc.load_spec(args.spec)


def _parse_t_grid(text: str) -> np.ndarray:
    """start:stop:linear|log10[:points] -> sample heights (default 51 points)."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValueError("--t-grid must be start:stop:scale[:points]")
    start, stop = float(parts[0]), float(parts[1])
    scale = parts[2]
    points = int(parts[3]) if len(parts) == 4 else 51
    if points < 2 or start <= 0 or stop <= start:
        raise ValueError("--t-grid needs 0 < start < stop and points >= 2")
    if scale == "log10":
        return np.logspace(math.log10(start), math.log10(stop), points)
    if scale == "linear":
        return np.linspace(start, stop, points)
    raise ValueError(f"--t-grid scale must be linear or log10, got {scale!r}")


def _write_csv(path: str, header: str, rows: list[str]) -> None:
    Path(path).write_text("\n".join([header] + rows) + "\n")


def cmd_hunt_resonance(args) -> int:
    spec = _load_spec_arg(args)
    report = hunter.hunt_resonance(
        spec, args.sigma, args.t, int(args.n),
        grid_step=args.grid_step, top_k=args.top_k,
        term_budget=int(args.term_budget), threads=resolve_threads(args.threads),
    )
    hunter.write_reports(args.out, [report])
    print(f"hunt-resonance: measured {report.measured:.6g} at t = {report.best_t:.6f}"
          f" (predicted {report.predicted:.6g})")
    return 0


def cmd_hunt_dio(args) -> int:
    spec = _load_spec_arg(args)
    report = hunter.hunt_diophantine(
        spec, args.sigma, args.t, args.b, M=args.m, theta=args.theta,
        eta=args.eta, mu=args.mu, grid_step=args.grid_step,
        threads=resolve_threads(args.threads),
    )
    hunter.write_reports(args.out, [report])
    print(f"hunt-dio: tent sum {report.measured:.6g} of Delta = {report.delta_big:.6g}"
          f" [{report.verdict}]")
    return 0


def cmd_hunt_thm3(args) -> int:
    spec = _load_spec_arg(args)
    report = hunter.hunt_theorem3(
        spec, args.t, theta=args.theta, grid_step=args.grid_step,
        threads=resolve_threads(args.threads),
    )
    hunter.write_reports(args.out, [report])
    print(f"hunt-thm3: measured {report.measured:.6g} vs predicted "
          f"{report.predicted:.6g} at sigma = {report.sigma:.6f}")
    return 0


def cmd_chen_verify(args) -> int:
    primes = [int(p) for p in args.primes.split(",") if p]
    if not primes:
        raise ValueError("--primes must list at least one prime")
    M = args.m
    lam = dio.lambda_exact(primes, M)
    rng = np.random.default_rng(args.seed)
    n = len(primes)
    length = 200.0 * M**n / (4 * math.pi * lam)
    rows = []
    passed = 0
    for trial in range(args.trials):
        betas = rng.uniform(0, 1, n)
        deltas = rng.uniform(1e-12, 1, n)
        T1 = float(rng.uniform(0, 1000))
        inst = dio.instance_from_primes(primes, betas, deltas, M, T1, T1 + length)
        bound = dio.chen_bound(inst, lam)
        t_best, value = dio.search_t(inst)
        ok = value <= bound + 1e-9
        passed += ok
        rows.append(f"{trial},{_fmt(t_best)},{_fmt(value)},{_fmt(bound)},{int(ok)}")
    if args.out:
        _write_csv(args.out, "trial,best_t,value,chen_bound,ok", rows)
    print(f"chen-verify: pass {passed}/{args.trials} "
          f"(primes {primes}, M = {M}, window length {length:.6g})")
    return 0 if passed == args.trials else 1


def cmd_resonator_ratio(args) -> int:
    spec = _load_spec_arg(args)
    recipe = resonator.plan_weights(spec, args.sigma, int(args.n))
    plan = resonator.expand(spec, recipe, int(args.n), int(args.term_budget))
    double = resonator.diagonal_ratio(spec, plan)
    factored = resonator.diagonal_ratio_factored(spec, plan)
    rel = abs(double - factored) / max(abs(double), 1e-300)
    _write_csv(args.out, "sigma,N,n_terms,ratio_double,ratio_factored,rel_gap",
               [f"{_fmt(args.sigma)},{int(args.n)},{len(plan.ns)},"
                f"{_fmt(double)},{_fmt(factored)},{_fmt(rel)}"])
    if args.dump_plan:
        resonator.dump_plan(plan, args.dump_plan)
    if args.dump_recipe:
        resonator.dump_recipe(recipe, spec, args.dump_recipe)
    print(f"resonator-ratio: {double:.12g} (factored {factored:.12g}, "
          f"rel gap {rel:.3g})")
    return 0


def cmd_prime_stats(args) -> int:
    spec = _load_spec_arg(args)
    total = lfunc.prime_sum_stats(spec, args.x, args.power)
    expected = spec.kappa * args.x / math.log(args.x)
    _write_csv(args.out, "x,power,sum,kappa_x_over_log_x,ratio",
               [f"{_fmt(args.x)},{args.power},{_fmt(total)},{_fmt(expected)},"
                f"{_fmt(total / expected)}"])
    print(f"prime-stats: sum = {total:.6g}, kappa x/log x = {expected:.6g}")
    return 0


def cmd_envelope(args) -> int:
    curve = hunter.EnvelopeCurve(
        kind=args.kind, kappa=args.kappa, m=args.m, sigma=args.sigma,
        eta=args.eta, c=args.c,
    )
    ts = _parse_t_grid(args.t_grid)
    rows = [f"{_fmt(t)},{_fmt(hunter.envelope(curve, float(t)))}" for t in ts]
    _write_csv(args.out, "T,value", rows)
    print(f"envelope: {args.kind} sampled at {len(rows)} heights -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="extrema",
        description="Hunt large values of Selberg-class L-functions and verify "
        "the bounds that predict them.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("--spec", default=None, help="key=value spec file (default: zeta)")
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap (default: EXTREMA_THREADS or 1)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default="report.csv")

    p = sub.add_parser("hunt-resonance", help="resonator-guided |L| maximum on [T, 2T]")
    common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--n", type=float, required=True, help="resonator length N")
    p.add_argument("--grid-step", type=float, default=None)
    p.add_argument("--top-k", type=int, default=64)
    p.add_argument("--term-budget", type=float, default=200000)
    p.set_defaults(fn=cmd_hunt_resonance)

    p = sub.add_parser("hunt-dio", help="tent-sum alignment hunt")
    common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--b", type=float, required=True, help="window scale B in x = B log T")
    p.add_argument("--m", type=int, default=4, help="integer box bound M")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--mu", type=float, default=0.05)
    p.add_argument("--grid-step", type=float, default=None)
    p.set_defaults(fn=cmd_hunt_dio)

    p = sub.add_parser("hunt-thm3", help="sigma -> 1+ hunt over [T, 2T]")
    common(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--grid-step", type=float, default=None)
    p.set_defaults(fn=cmd_hunt_thm3)

    p = sub.add_parser("chen-verify", help="randomized search-vs-bound trials")
    common(p, spec=False)
    p.add_argument("--primes", required=True, help="comma list, e.g. 2,3,5,7")
    p.add_argument("--m", type=int, required=True, help="integer box bound M")
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(fn=cmd_chen_verify, out=None)

    p = sub.add_parser("resonator-ratio", help="diagonal ratio, both routes")
    common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--term-budget", type=float, default=200000)
    p.add_argument("--dump-plan", default=None)
    p.add_argument("--dump-recipe", default=None)
    p.set_defaults(fn=cmd_resonator_ratio)

    p = sub.add_parser("prime-stats", help="sum of |a(p)|^power up to x")
    common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--power", type=int, default=2, choices=(1, 2))
    p.set_defaults(fn=cmd_prime_stats)

    p = sub.add_parser("envelope", help="sample a predicted bound curve")
    common(p, spec=False)
    p.add_argument("--kind", required=True, choices=hunter.ENVELOPE_KINDS)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--t-grid", required=True, help="start:stop:linear|log10[:points]")
    p.set_defaults(fn=cmd_envelope)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
