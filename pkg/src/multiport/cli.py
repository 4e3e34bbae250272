"""Command-line interface: ``multiport {mub,witness,sweep,critical-eta,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .bsv import STATE_NORM, WEIGHTINGS, BsvSpec
from .fock import DEFAULT_CUTOFF
from .mub import build_mub, is_prime
from .verification import mub_certificate, run_verification
from .witness import KINDS, RATE_KINDS, NoBracketError, criterion, critical_eta

SWEEP_HEADER = ["criterion", "p", "gamma", "eta", "cutoff", "lhs", "rhs", "witness", "entangled"]


def fmt(x: float) -> str:
    return f"{x:.12g}"


def num(x: float):
    """JSON-safe number rounded to 12 significant digits (NaN becomes null)."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return None
    return float(fmt(x))


def _spec(args, gamma: float) -> BsvSpec:
    renorm = args.renormalized
    if renorm is None:
        renorm = args.criterion in RATE_KINDS
    return BsvSpec(args.p, gamma, args.cutoff, renorm)


def _grid(lo: float, hi: float, steps: int) -> list[float]:
    return [float(x) for x in np.linspace(lo, hi, steps)]


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def report_json(report) -> dict:
    out = {
        "criterion": report.criterion,
        "p": report.p,
        "gamma": num(report.gamma),
        "eta": num(report.eta),
        "cutoff": report.cutoff,
        "weighting": report.weighting,
        "renormalized": report.renormalized,
        "lhs": num(report.lhs),
        "rhs": num(report.rhs),
        "witness": num(report.witness),
        "verdict": report.verdict,
        "truncated_mass": num(report.truncated_mass),
    }
    if report.reason is not None:
        out["reason"] = report.reason
    return out


def cmd_mub(args) -> int:
    settings = build_mub(args.p)
    overlap_dev, unitary_dev = mub_certificate(args.p)
    doc = {
        "p": args.p,
        "settings": [
            {
                "m": u.m,
                "identity": u.is_identity_setting,
                "matrix": [[[num(z.real), num(z.imag)] for z in row] for row in u.matrix],
            }
            for u in settings
        ],
        "certification": {
            "max_overlap_dev": num(overlap_dev),
            "max_unitarity_dev": num(unitary_dev),
            "passed": overlap_dev < 1e-12 and unitary_dev < 1e-12,
            "statement": "max_overlap_dev < 1e-12" if overlap_dev < 1e-12 else "max_overlap_dev >= 1e-12",
        },
    }
    _write(json.dumps(doc, indent=2) + "\n", args.output)
    return 0


def cmd_witness(args) -> int:
    report = criterion(args.criterion, _spec(args, args.gamma), args.eta, args.weighting)
    _write(json.dumps(report_json(report), indent=2) + "\n", args.output)
    return 0


def _sweep_point(job):
    kind, spec, eta, weighting = job
    return criterion(kind, spec, eta, weighting)


def sweep_reports(args) -> list:
    jobs = [
        (args.criterion, _spec(args, g), e, args.weighting)
        for g in _grid(*args.gamma_range, args.gamma_steps)
        for e in _grid(*args.eta_range, args.eta_steps)
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(_sweep_point, jobs, chunksize=max(1, len(jobs) // (4 * args.jobs))))
    return [_sweep_point(j) for j in jobs]


def cmd_sweep(args) -> int:
    reports = sweep_reports(args)
    if args.format == "json":
        _write(json.dumps([report_json(r) for r in reports], indent=2) + "\n", args.output)
        return 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for r in reports:
        writer.writerow(
            [r.criterion, r.p, fmt(r.gamma), fmt(r.eta), r.cutoff, fmt(r.lhs), fmt(r.rhs), fmt(r.witness),
             "true" if r.entangled else "false"]
        )
    _write(buf.getvalue(), args.output)
    return 0


def cmd_critical_eta(args) -> int:
    gammas = [args.gamma] if args.gamma is not None else _grid(*args.gamma_range, args.gamma_steps)
    rows = []
    for g in gammas:
        try:
            eta, iterations = critical_eta(args.criterion, _spec(args, g), args.weighting, tol=args.tol, full_output=True)
            rows.append({"gamma": num(g), "eta_critical": num(eta), "iterations": iterations})
        except NoBracketError as exc:
            rows.append({"gamma": num(g), "eta_critical": None, "iterations": 0, "reason": str(exc)})
    _write(json.dumps(rows, indent=2) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    results = run_verification(seed=args.seed, samples=args.samples, bound_samples=args.bound_samples)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}")
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multiport", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_kind=True):
        p.add_argument("--p", type=int, default=3, help="number of modes per party (prime)")
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        if with_kind:
            p.add_argument("--criterion", choices=KINDS, default="rate-d3")
            p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
            p.add_argument("--weighting", choices=WEIGHTINGS, default=STATE_NORM)
            p.add_argument(
                "--renormalized", action=argparse.BooleanOptionalAction, default=None,
                help="project out the vacuum before loss (default: on for rate criteria)",
            )

    p_mub = sub.add_parser("mub", help="export the unbiased multiport matrices as JSON")
    common(p_mub, with_kind=False)
    p_mub.set_defaults(func=cmd_mub)

    p_wit = sub.add_parser("witness", help="evaluate one criterion at a single (gamma, eta)")
    common(p_wit)
    p_wit.add_argument("--gamma", type=float, required=True)
    p_wit.add_argument("--eta", type=float, required=True)
    p_wit.set_defaults(func=cmd_witness)

    p_sweep = sub.add_parser("sweep", help="evaluate a criterion over a (gamma, eta) grid")
    common(p_sweep)
    p_sweep.add_argument("--gamma-range", type=float, nargs=2, default=(0.1, 3.0), metavar=("LO", "HI"))
    p_sweep.add_argument("--gamma-steps", type=int, default=10)
    p_sweep.add_argument("--eta-range", type=float, nargs=2, default=(0.1, 1.0), metavar=("LO", "HI"))
    p_sweep.add_argument("--eta-steps", type=int, default=10)
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_sweep.set_defaults(func=cmd_sweep)

    p_crit = sub.add_parser("critical-eta", help="bisect the efficiency threshold per gain")
    common(p_crit)
    p_crit.add_argument("--gamma", type=float, default=None, help="single gain (overrides the range)")
    p_crit.add_argument("--gamma-range", type=float, nargs=2, default=(0.05, 3.0), metavar=("LO", "HI"))
    p_crit.add_argument("--gamma-steps", type=int, default=5)
    p_crit.add_argument("--tol", type=float, default=1e-4)
    p_crit.set_defaults(func=cmd_critical_eta)

    p_ver = sub.add_parser("verify", help="run identity, bound, oracle and threshold checks")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--samples", type=int, default=1000)
    p_ver.add_argument("--bound-samples", type=int, default=10_000)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def _validate(parser: argparse.ArgumentParser, args) -> None:
    if hasattr(args, "p") and not is_prime(args.p):
        parser.error(f"--p {args.p} is not prime")
    if getattr(args, "eta", None) is not None and not 0 <= args.eta <= 1:
        parser.error("--eta must lie in [0, 1]")
    if hasattr(args, "eta_range") and not all(0 <= e <= 1 for e in args.eta_range):
        parser.error("--eta-range must lie in [0, 1]")
    for name in ("gamma_steps", "eta_steps"):
        if getattr(args, name, 1) < 1:
            parser.error(f"--{name.replace('_', '-')} must be at least 1")
    if getattr(args, "gamma", None) is not None and args.gamma < 0:
        parser.error("--gamma must be non-negative")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    kind = getattr(args, "criterion", None)
    if kind in ("rate-d3", "intensity-d3") and args.p != 3:
        parser.error(f"criterion {kind} needs --p 3")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"multiport: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
