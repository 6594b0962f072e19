"""``pradius compute PROBLEM``: run estimators on a problem file or built-in fixture.

Exit status is 0 on success, 1 on any error and 2 when ``--strict`` is given
and validation fails.  Output is deterministic for fixed inputs and seed;
wall-clock timings appear only with ``--timings``.
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings

import mpmath

from . import baselines
from .determinant import PrecisionWarning, derived_quantity_jp, estimate_p_radius
from .linalg import PRadiusError, parse_scalar, to_mpf, working_precision
from .problem import FIXTURES, ProblemError, load_problem
from .report import FORMATS, MethodReport, emit
from .validation import validate

METHODS = ("det", "naive", "kron", "logconvex", "jp", "mesh", "mc")
NAIVE_LOWER_MAX = 8


def _ints(text: str) -> list:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pradius", description="Estimate the p-radius of a matrix tuple.")
    sub = parser.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="run one or all estimators")
    c.add_argument("problem", help=f"problem file (JSON) or fixture name ({', '.join(FIXTURES)})")
    c.add_argument("--method", choices=METHODS + ("all",), default="det")
    c.add_argument("--p", help="exponent p (overrides the problem file)")
    c.add_argument("--n", type=int, default=12, help="maximum word length / truncation order")
    c.add_argument("--mesh", type=_ints, default=[10, 100, 1000], help="comma-separated mesh sizes")
    c.add_argument("--mc-length", type=int, default=1000)
    c.add_argument("--mc-runs", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--precision", type=int, help="working precision in bits (default from problem, 256)")
    c.add_argument("--weights", help="'uniform' or comma-separated probabilities")
    c.add_argument("--conjugator", help="d*d comma-separated entries, row-major, e.g. 3,-1,-1,3")
    c.add_argument("--domination-order", type=int, default=10)
    c.add_argument("--strict", action="store_true", help="exit 2 without computing if validation fails")
    c.add_argument("--format", choices=FORMATS, default="table")
    c.add_argument("--threads", type=int, default=1, help="worker processes for the determinant traces")
    c.add_argument("--output", help="write to this file instead of standard output")
    c.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")
    return parser


def _ptext(p) -> str:
    """``3.5`` rather than ``7/2`` when the value is an exact binary fraction."""
    try:
        return repr(float(p)) if parse_scalar(float(p)) == p else str(p)
    except (OverflowError, ValueError):
        return str(p)


def _apply_overrides(spec, args):
    if args.p is not None:
        spec.p = args.p
    if args.precision is not None:
        if args.precision < 64:
            raise ProblemError("--precision must be at least 64")
        spec.precision_bits = args.precision
    if args.weights is not None:
        count = len(spec.matrices)
        if args.weights == "uniform":
            spec.weights = [f"1/{count}"] * count
        else:
            spec.weights = [w.strip() for w in args.weights.split(",")]
            if len(spec.weights) != count:
                raise ProblemError(f"--weights: expected {count} entries")
    if args.conjugator is not None:
        entries = [x.strip() for x in args.conjugator.split(",")]
        d = len(spec.matrices[0])
        if len(entries) != d * d:
            raise ProblemError(f"--conjugator: expected {d * d} entries")
        spec.conjugator = [entries[i * d:(i + 1) * d] for i in range(d)]
    return spec


def _validation_summary(report) -> dict:
    return {
        "verdict": report.verdict,
        "positive": report.positive,
        "conjugated_positive": report.conjugated_positive,
        "domination_order": report.domination_order,
        "domination_exponent": None if report.domination_exponent is None
        else mpmath.nstr(report.domination_exponent, 15),
        "zero_radius": report.zero_radius,
        "notes": list(report.notes),
    }


def _run_det(tup, p, args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PrecisionWarning)
        ests = estimate_p_radius(tup, p, args.n, workers=args.threads)
    rows = []
    for e in ests:
        diff = e.diagnostics.get("successive_difference")
        rows.append([e.n, e.value, e.status, diff])
    meta = {}
    last = next((e for e in reversed(ests) if e.value is not None), None)
    if last is not None:
        meta["jp_exponent"] = mpmath.nstr(derived_quantity_jp(last, p), 30)
    notes = [str(w.message) for w in caught]
    notes.append("successive differences are empirical, not error bounds")
    return MethodReport("det", {"n": args.n, "p": _ptext(p)},
                        ["n", "estimate", "status", "successive_difference"], rows,
                        tup.precision, {"estimate": 25, "successive_difference": "e2"}, meta, notes)


def _run_naive(tup, p, args):
    n_lower = min(args.n, NAIVE_LOWER_MAX)
    while n_lower > 0 and tup.count ** (n_lower * tup.dim) > baselines.naive.DEFAULT_BUDGET:
        n_lower -= 1
    pairs = baselines.naive_bounds(tup, p, args.n, n_lower)
    rows = [[b.n, b.upper, b.lower] for b in pairs]
    kpd = baselines.NaiveConfig.for_dimension(p, tup.dim).kpd
    return MethodReport("naive", {"n": args.n, "n_lower": n_lower, "p": _ptext(p)}, ["n", "upper", "lower"],
                        rows, tup.precision, {"upper": 10, "lower": 10},
                        {"norm": "spectral", "K(p,d)": mpmath.nstr(kpd, 15)},
                        ["rigorous bounds for every n"])


def _run_kron(tup, p, args):
    pm = to_mpf(p)
    ks = sorted({int(mpmath.floor(pm)), int(mpmath.ceil(pm))} - {0})
    rows = [[k, baselines.kronecker_estimate(tup, k), baselines.kronecker_is_exact(tup, k)] for k in ks]
    return MethodReport("kron", {"p": _ptext(p)}, ["k", "estimate", "exact"], rows, tup.precision,
                        {"estimate": 20}, {}, ["inexact rows are upper bounds on rho_k"])


def _run_logconvex(tup, p, args):
    return MethodReport("logconvex", {"p": _ptext(p)}, ["p", "upper"],
                        [[_ptext(p), baselines.logconvex_upper(tup, p)]], tup.precision, {"upper": 15})


def _run_jp(tup, p, args):
    rows = []
    for n in range(1, args.n + 1):
        b = baselines.jp_bounds(tup, p, n)
        rows.append([n, b.upper, b.lower])
    return MethodReport("jp", {"n": args.n, "p": _ptext(p)}, ["n", "upper", "lower"], rows,
                        digits={"upper": 10, "lower": 10},
                        metadata={"solver_tolerance": baselines.jp.SOLVER_TOLERANCE},
                        disclaimers=["float solver: bounds hold up to the solver tolerance"])


def _run_mesh(tup, p, args):
    rows = [[m, baselines.mesh_estimate(tup, p, m)] for m in args.mesh]
    return MethodReport("mesh", {"sizes": ",".join(map(str, args.mesh)), "p": _ptext(p)},
                        ["mesh_size", "estimate"], rows, digits={"estimate": 10},
                        metadata={"sampling": "midpoint"},
                        disclaimers=["heuristic: no error bound"])


def _run_mc(tup, p, args):
    cfg = baselines.MonteCarloConfig(args.mc_length, args.mc_runs, args.seed)
    value = baselines.monte_carlo_estimate(tup, p, cfg)
    return MethodReport("mc", {"length": args.mc_length, "runs": args.mc_runs, "seed": args.seed,
                               "p": _ptext(p)},
                        ["length", "runs", "estimate"], [[args.mc_length, args.mc_runs, value]],
                        digits={"estimate": 7}, disclaimers=["statistical estimate"])


RUNNERS = {"det": _run_det, "naive": _run_naive, "kron": _run_kron, "logconvex": _run_logconvex,
           "jp": _run_jp, "mesh": _run_mesh, "mc": _run_mc}


def run(args) -> tuple:
    """Return ``(exit_code, text)``; raises :class:`PRadiusError` or ``ValueError`` on bad input."""
    spec = _apply_overrides(load_problem(args.problem), args)
    tup = spec.matrix_tuple()
    p = parse_scalar(spec.p)
    conj = spec.conjugator_matrix()
    with working_precision(tup.precision):
        report = validate(tup, conj, args.domination_order)
    summary = _validation_summary(report)
    if args.strict and report.verdict == "fail":
        return 2, emit([], args.format, summary)
    methods = METHODS if args.method == "all" else (args.method,)
    reports = []
    for name in methods:
        start = time.perf_counter()
        if report.zero_radius:
            rep = MethodReport(name, {"p": _ptext(p)}, ["estimate"], [[0]],
                               disclaimers=["all products of length d vanish: rho_p = 0"])
        else:
            try:
                rep = RUNNERS[name](tup, p, args)
            except (PRadiusError, ValueError) as exc:
                if args.method != "all":
                    raise PRadiusError(f"{name}: {exc}") from exc
                rep = MethodReport(name, {"p": _ptext(p)}, [], [], disclaimers=[f"skipped: {exc}"])
        if args.timings:
            rep.metadata["seconds"] = round(time.perf_counter() - start, 3)
        reports.append(rep)
    return 0, emit(reports, args.format, summary)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, text = run(args)
    except (PRadiusError, ValueError, ZeroDivisionError) as exc:
        print(f"pradius: error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
