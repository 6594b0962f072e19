"""Acceptance criteria, each at its stated tolerance.

Every test records its checks in ``conftest.ACCEPTANCE``; a terminal summary
prints one PASS/FAIL line per criterion at the end of the run.
"""

import time

import mpmath
import pytest

import golden
from conftest import ACCEPTANCE
from pradius import (
    MatrixTuple,
    check_domination,
    check_positive,
    derived_quantity_jp,
    det_coefficients,
    estimate_p_radius,
    partition_sum_coefficient,
    trace_sequence,
    zero_radius_check,
)
from pradius.baselines import (
    MonteCarloConfig,
    jp_bounds,
    kronecker_estimate,
    logconvex_upper,
    mesh_estimate,
    monte_carlo_estimate,
    naive_bounds,
)
from pradius.linalg import Matrix
from pradius.validation import Conjugator

P = "3.5"


def record(number, ok, detail):
    ACCEPTANCE.setdefault(number, []).append((bool(ok), detail))
    return bool(ok)


def finish(number):
    failed = [d for ok, d in ACCEPTANCE[number] if not ok]
    assert not failed, "; ".join(failed)


def test_criterion_1_determinant_reference_rows(jp_pair):
    start = time.perf_counter()
    ests = {e.n: e for e in estimate_p_radius(jp_pair, P, 12)}
    elapsed = time.perf_counter() - start
    worst = mpmath.mpf(0)
    with mpmath.workprec(256):
        for n, ref in golden.DET_ESTIMATES.items():
            value = ests[n].value
            if value is None:
                record(1, False, f"n={n} has no estimate")
                continue
            worst = max(worst, abs(value - mpmath.mpf(ref)))
    record(1, worst <= mpmath.mpf("1e-25"), f"max |1/r_n - reference| = {mpmath.nstr(worst, 3)} (tol 1e-25)")
    no_root = [n for n in golden.DET_NO_ROOT if ests[n].status == "no-real-root"]
    record(1, no_root == list(golden.DET_NO_ROOT), f"no-real-root at n={no_root}")
    record(1, elapsed < 10, f"runtime {elapsed:.2f}s (< 10s)")
    finish(1)


@pytest.mark.slow
def test_criterion_2_order_twenty(jp_pair):
    start = time.perf_counter()
    est = estimate_p_radius(jp_pair, P, 20)[-1]
    elapsed = time.perf_counter() - start
    with mpmath.workprec(256):
        ref = mpmath.mpf(golden.DET_N20)
        rel = abs(est.value - ref) / ref
        jp = derived_quantity_jp(est, P)
        jp_ref = mpmath.mpf(golden.JP_EXPONENT)
        jp_rel = abs(jp - jp_ref) / jp_ref
    record(2, rel < mpmath.mpf("1e-45"), f"1/r_20 relative error {mpmath.nstr(rel, 3)} (tol 1e-45)")
    record(2, jp_rel < mpmath.mpf("1e-45"), f"derived exponent relative error {mpmath.nstr(jp_rel, 3)}")
    record(2, elapsed < 900, f"runtime {elapsed:.1f}s (< 900s)")
    finish(2)


def test_criterion_3_naive_bounds(jp_pair):
    pairs = naive_bounds(jp_pair, P, 12, 8)
    tol = mpmath.mpf("1e-10")
    up = max(abs(b.upper - mpmath.mpf(golden.NAIVE_UPPER[b.n])) for b in pairs)
    lo = max(abs(b.lower - mpmath.mpf(golden.NAIVE_LOWER[b.n])) for b in pairs if b.n <= 8)
    record(3, up <= tol, f"upper n=1..12 max error {mpmath.nstr(up, 3)} (tol 1e-10)")
    record(3, lo <= tol, f"lower n=1..8 max error {mpmath.nstr(lo, 3)} (tol 1e-10)")
    finish(3)


def test_criterion_4_kronecker_and_logconvexity(jp_pair):
    with mpmath.workprec(256):
        upper = logconvex_upper(jp_pair, P)
        err = abs(upper - mpmath.mpf(golden.LOGCONVEX_UPPER))
        kron = kronecker_estimate(jp_pair, 2)
        det = estimate_p_radius(jp_pair, 2, 10)[-1].value
        gap = abs(kron - det)
    record(4, err <= mpmath.mpf("1e-9"), f"log-convex bound {mpmath.nstr(upper, 12)} error {mpmath.nstr(err, 3)}")
    record(4, gap <= mpmath.mpf("1e-12"), f"p=2 Kronecker vs det(n=10) gap {mpmath.nstr(gap, 3)} (tol 1e-12)")
    finish(4)


def test_criterion_5_jp_bounds(jp_pair):
    up = lo = 0.0
    for n in range(1, 13):
        b = jp_bounds(jp_pair, 3.5, n)
        up = max(up, abs(b.upper - golden.JP_UPPER[n]))
        lo = max(lo, abs(b.lower - golden.JP_LOWER[n]))
    record(5, up <= 1e-6, f"upper max error {up:.2e} (tol 1e-6)")
    record(5, lo <= 1e-6, f"lower max error {lo:.2e} (tol 1e-6)")
    finish(5)


def test_criterion_6_mesh(jp_pair):
    for size, ref in golden.MESH.items():
        tol = 1e-7 if size <= 1000 else 1e-6
        start = time.perf_counter()
        value = mesh_estimate(jp_pair, 3.5, size)
        elapsed = time.perf_counter() - start
        record(6, abs(value - ref) <= tol, f"mesh {size}: error {abs(value - ref):.1e} (tol {tol:.0e})")
        if size == 100000:
            record(6, elapsed < 300, f"mesh 1e5 runtime {elapsed:.2f}s (< 300s)")
    finish(6)


def test_criterion_7_monte_carlo(jp_pair):
    hits = 0
    for seed in range(1, 11):
        value = monte_carlo_estimate(jp_pair, 3.5, MonteCarloConfig(1000, 1000, seed))
        hits += abs(value - golden.RHO) < 2e-3
    again = [monte_carlo_estimate(jp_pair, 3.5, MonteCarloConfig(1000, 1000, 7)) for _ in range(2)]
    record(7, hits >= 8, f"{hits}/10 seeds within 2e-3 of {golden.RHO}")
    record(7, again[0] == again[1], "same seed gives bit-identical output")
    finish(7)


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_8_property_suite(jp_pair):
    bound = mpmath.ldexp(1, -128)
    with mpmath.workprec(256):
        traces = trace_sequence(jp_pair, P, 12)

        approx = det_coefficients(traces, cross_check=False)
        worst = max(_rel(approx.coefficients[n], partition_sum_coefficient(traces, n)[0])
                    for n in range(1, 7))
        record(8, worst < bound, f"recursion vs partition rel err {mpmath.nstr(worst, 3)}")

        c = mpmath.mpf(3) / 7
        scaled = trace_sequence(jp_pair.scaled(c), P, 8)
        pm = mpmath.mpf(P)
        worst = max(_rel(scaled[n], c ** (n * pm) * traces[n]) for n in range(1, 9))
        record(8, worst < bound, f"scaling equivariance rel err {mpmath.nstr(worst, 3)}")

        conj = Conjugator.from_matrix(Matrix.from_rows(golden.X))
        similar = trace_sequence(conj.apply(jp_pair), P, 8)
        worst = max(_rel(similar[n], traces[n]) for n in range(1, 9))
        record(8, worst < bound, f"similarity invariance rel err {mpmath.nstr(worst, 3)}")

        weighted = trace_sequence(jp_pair.with_weights(["1/2", "1/2"]), P, 8)
        worst = max(_rel(weighted[n], traces[n] / 2 ** n) for n in range(1, 9))
        record(8, worst < bound, f"weighted identity rel err {mpmath.nstr(worst, 3)}")

        single = MatrixTuple.from_rows([[[2, 1], [1, 1]]])
        lam = (3 + mpmath.sqrt(5)) / 2
        worst = max(abs(estimate_p_radius(single, p, 8)[-1].value - lam ** mpmath.mpf(p))
                    for p in ("1", "2", "3.5"))
        record(8, worst < mpmath.mpf("1e-20"), f"single-matrix oracle error {mpmath.nstr(worst, 3)}")

        root = estimate_p_radius(jp_pair, P, 12, traces=traces)[-1].root
        residual = abs(traces[12] * root ** 12 - 1)
        record(8, residual < mpmath.mpf("1e-10"),
               f"|t_12 r_12^12 - 1| = {mpmath.nstr(residual, 4)} (tol 1e-10)")
    finish(8)


def test_criterion_9_validation(jp_pair, jp_spec):
    raw = check_positive(jp_pair)
    conj = Conjugator.from_matrix(jp_spec.conjugator_matrix())
    after = check_positive(conj.apply(jp_pair))
    exponent = check_domination(jp_pair, 10)
    nilpotent = MatrixTuple.from_rows([[[0, 1], [0, 0]], [[0, 3], [0, 0]]])
    record(9, not raw, "raw pair is not positive")
    record(9, after, "conjugated pair is positive")
    record(9, exponent < 0, f"domination exponent at n=10 is {mpmath.nstr(exponent, 6)}")
    record(9, zero_radius_check(nilpotent), "nilpotent pair has zero radius")
    finish(9)
