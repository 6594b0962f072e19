"""p-radius by truncated Fredholm determinants.

For a multipositive tuple the traces

    t_n = sum_{|w|=n} lambda_1(A_w)^(d-1) rho(A_w)^p / p'_{A_w}(lambda_1(A_w))

are the power sums of the eigenvalues of a trace-class transfer operator
whose leading eigenvalue is the p-radius.  Newton's identities turn the
traces into Taylor coefficients ``a_n`` of the operator's Fredholm
determinant, and the reciprocal of the smallest positive root of the
degree-``n`` truncation converges to the p-radius super-exponentially fast.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field

import mpmath

from .linalg import (
    DEFAULT_PRECISION,
    DominanceError,
    ExactSum,
    MatrixTuple,
    PRadiusError,
    charpoly_numerator,
    parse_scalar,
    spectral_from_charpoly,
    to_mpf,
    working_precision,
)
from .words import partitioned_visit, visit_tree

CROSS_CHECK_ORDER = 6


class ConsistencyError(PRadiusError):
    """Two independent evaluations of the same quantity disagree."""


class PrecisionWarning(UserWarning):
    """Cancellation has consumed most of the working precision."""


@dataclass(frozen=True)
class TraceSequence:
    p: mpmath.mpf
    values: tuple
    precision: int
    weighted: bool = False

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        """``t_n`` for ``n >= 1``."""
        if n < 1:
            raise IndexError("traces are indexed from 1")
        return self.values[n - 1]


@dataclass(frozen=True)
class DeterminantApproximant:
    """Coefficients ``a_0 = 1, a_1, ..., a_n`` of the truncated determinant ``D_n``."""

    coefficients: tuple
    precision: int
    source: str = "recursion"
    noise: tuple = field(default=(), compare=False, repr=False)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def truncated(self, n: int) -> "DeterminantApproximant":
        return DeterminantApproximant(self.coefficients[: n + 1], self.precision, self.source,
                                      self.noise[: n + 1])

    def __call__(self, z):
        with working_precision(self.precision):
            return _horner(self.coefficients, mpmath.mpf(z))


@dataclass(frozen=True)
class PRadiusEstimate:
    """One estimate of the p-radius.

    ``status`` is ``"converged"`` when a value is present, ``"no-real-root"``
    when the truncated determinant has no positive root below the search cap,
    and ``"error"`` otherwise.
    """

    method: str
    value: object
    n: int | None = None
    root: object = None
    status: str = "converged"
    precision: int | None = None
    diagnostics: dict = field(default_factory=dict)


def _horner(coeffs, z):
    val = mpmath.mpf(0)
    for c in reversed(coeffs):
        val = val * z + c
    return val


# ---------------------------------------------------------------------------
# traces


class _TraceAccumulator:
    def __init__(self, p, n_max, dim, precision):
        self.p = p
        self.dim = dim
        self.precision = precision
        self.sums = [ExactSum() for _ in range(n_max)]
        self.cache = {}

    def __call__(self, visit):
        prod = visit.product
        key = (prod.den, charpoly_numerator(prod))
        term = self.cache.get(key)
        if term is None:
            d = self.dim
            try:
                sd = spectral_from_charpoly(key[1], prod.den, d,
                                            prod.to_numpy() if d >= 3 else None)
            except DominanceError as exc:
                raise DominanceError(str(exc), visit.word) from None
            term = sd.lambda1 ** (d - 1) * mpmath.power(sd.rho, self.p) / sd.char_deriv
            self.cache[key] = term
        if visit.weight != 1:
            term = term * visit.weight
        self.sums[len(visit.word) - 1].add(term, visit.multiplicity)

    def result(self):
        return self.sums


def _make_trace_accumulator(p, n_max, dim, precision):
    return _TraceAccumulator(p, n_max, dim, precision)


def trace_sequence(tup: MatrixTuple, p, n_max: int, *, prec: int | None = None,
                   workers: int | None = None, prefix_depth: int | None = None,
                   necklaces: bool = False) -> TraceSequence:
    """Compute ``t_1, ..., t_{n_max}``.

    If the tuple carries probability weights each summand is multiplied by
    ``p_w = p_{w_1} ... p_{w_n}``.  Sums are accumulated exactly and rounded
    once, so the result does not depend on ``workers``, ``prefix_depth`` or
    ``necklaces``.  Raises :class:`DominanceError` naming the first word
    whose product has no simple dominant real eigenvalue.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    prec = prec or tup.precision
    tup = tup.with_precision(prec)
    with working_precision(prec):
        p_mp = to_mpf(parse_scalar(p))
        factory = functools.partial(_make_trace_accumulator, p_mp, n_max, tup.dim, prec)
        if workers and workers > 1 and n_max > 1:
            depth = prefix_depth or min(n_max - 1, max(1, math.ceil(math.log(4 * workers, tup.count)))
                                        if tup.count > 1 else 1)
            head = factory()
            if depth > 1:
                visit_tree(tup, depth - 1, head, necklaces=necklaces)
            sums = head.result()
            for part in partitioned_visit(tup, n_max, depth, factory, tree=True,
                                          necklaces=necklaces, workers=workers):
                for total, s in zip(sums, part):
                    total.merge(s)
        else:
            acc = factory()
            visit_tree(tup, n_max, acc, necklaces=necklaces)
            sums = acc.result()
        values = tuple(s.value() for s in sums)
    return TraceSequence(p_mp, values, prec, tup.weights is not None)


# ---------------------------------------------------------------------------
# determinant coefficients


def _compositions(n):
    """All ordered tuples of positive integers summing to ``n``."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def partition_sum_coefficient(traces, n: int):
    """``a_n`` from the explicit sum over compositions of ``n``; returns ``(a_n, scale)``.

    ``scale`` is the sum of the absolute values of the terms, a measure of
    how much cancellation the sum involved.  ``traces`` is a
    :class:`TraceSequence` or a plain 0-indexed sequence ``(t_1, t_2, ...)``.
    """
    if isinstance(traces, TraceSequence):
        with working_precision(traces.precision):
            return partition_sum_coefficient(traces.values, n)
    by_parts = {}
    scale = mpmath.mpf(0)
    for comp in _compositions(n):
        term = mpmath.mpf(1)
        for m in comp:
            term *= traces[m - 1] / m
        k = len(comp)
        by_parts[k] = by_parts.get(k, mpmath.mpf(0)) + term
        scale += abs(term) / math.factorial(k)
    total = mpmath.mpf(0)
    for k, s in by_parts.items():
        total += (-1) ** k * s / math.factorial(k)
    return total, scale


def det_coefficients(traces: TraceSequence, *, cross_check: bool = True) -> DeterminantApproximant:
    """Taylor coefficients of the determinant from the traces via Newton's identities.

    ``n a_n = -sum_{k=1}^n t_k a_{n-k}``.  For ``n <= 6`` the result is
    compared with the explicit composition sum and a
    :class:`ConsistencyError` is raised if they differ by more than
    ``2**(-precision/2)`` relative to the size of the terms.
    """
    if not traces.values:
        raise ValueError("empty trace sequence")
    prec = traces.precision
    t = traces.values
    with working_precision(prec):
        a = [mpmath.mpf(1)]
        noise = [mpmath.mpf(0)]
        ulp = mpmath.ldexp(1, -prec)
        for n in range(1, len(t) + 1):
            terms = [t[k - 1] * a[n - k] for k in range(1, n + 1)]
            a.append(-mpmath.fsum(terms) / n)
            noise.append(ulp * mpmath.fsum(abs(x) for x in terms) / n)
        if cross_check:
            tol = mpmath.ldexp(1, -prec // 2)
            for n in range(1, min(len(t), CROSS_CHECK_ORDER) + 1):
                ref, scale = partition_sum_coefficient(t, n)
                if abs(a[n] - ref) > tol * max(abs(ref), scale):
                    raise ConsistencyError(
                        f"a_{n}: recursion {mpmath.nstr(a[n], 20)} vs composition sum "
                        f"{mpmath.nstr(ref, 20)}; precision too low or traces inconsistent")
    return DeterminantApproximant(tuple(a), prec, "recursion", tuple(noise))


# ---------------------------------------------------------------------------
# roots


def smallest_positive_root(approx: DeterminantApproximant, *, cap_factor=64,
                           step=mpmath.mpf(2) ** -6):
    """Least ``r > 0`` with ``D_n(r) = 0``, or ``None``.

    Every root satisfies ``|z| >= 1 / (2 M)`` with ``M = max_k |a_k|^(1/k)``,
    so the scan starts there and proceeds in multiplicative steps of
    ``1 + step`` up to ``cap_factor / M``.  The first sign change is
    bisected down to a relative width ``2**(-precision + 16)`` and polished by
    Newton's method.
    """
    a = approx.coefficients
    if len(a) < 2:
        return None
    with working_precision(approx.precision):
        mags = [abs(c) ** (mpmath.mpf(1) / k) for k, c in enumerate(a) if k and c != 0]
        if not mags:
            return None
        bound = max(mags)
        z = 1 / (2 * bound)
        cap = cap_factor / bound
        factor = 1 + mpmath.mpf(step)
        prev_z, prev_v = mpmath.mpf(0), a[0]
        while prev_z < cap:
            v = _horner(a, z)
            if v == 0:
                return z
            if (v > 0) != (prev_v > 0):
                return _refine_root(a, prev_z, z, prev_v)
            prev_z, prev_v = z, v
            z = z * factor
        return None


def _refine_root(a, lo, hi, v_lo):
    width = mpmath.ldexp(1, -mpmath.mp.prec + 16)
    lo_positive = v_lo > 0
    while hi - lo > width * hi:
        mid = (lo + hi) / 2
        v = _horner(a, mid)
        if v == 0:
            return mid
        if (v > 0) == lo_positive:
            lo = mid
        else:
            hi = mid
    deriv = [k * c for k, c in enumerate(a)][1:]
    x = (lo + hi) / 2
    for _ in range(8):
        dv = _horner(deriv, x)
        if dv == 0:
            break
        nx = x - _horner(a, x) / dv
        if not lo <= nx <= hi or nx == x:
            break
        x = nx
    return x


# ---------------------------------------------------------------------------
# end to end


def estimate_p_radius(tup: MatrixTuple, p, n_max: int, *, prec: int | None = None,
                      workers: int | None = None, necklaces: bool = False,
                      traces: TraceSequence | None = None) -> list:
    """Determinant-method estimates ``1/r_n`` for ``n = 1, ..., n_max``.

    Diagnostics are empirical, not error bounds: ``successive_difference`` is
    the change from the previous available estimate, ``trace_residual`` is
    ``t_n r_n^n - 1`` and ``significant_bits`` estimates how many bits of
    ``a_n`` survived cancellation.  A :class:`PrecisionWarning` is issued
    when that falls below a quarter of the working precision.
    """
    if traces is None:
        traces = trace_sequence(tup, p, n_max, prec=prec, workers=workers, necklaces=necklaces)
    full = det_coefficients(traces)
    prec = traces.precision
    out = []
    prev = None
    with working_precision(prec):
        for n in range(1, min(n_max, len(traces)) + 1):
            approx = full.truncated(n)
            an, noise = approx.coefficients[n], approx.noise[n]
            bits = float(mpmath.log(abs(an) / noise, 2)) if an != 0 and noise != 0 else float(prec)
            diag = {"significant_bits": bits}
            if bits < prec / 4:
                warnings.warn(f"a_{n} retains only {bits:.0f} significant bits at {prec}-bit "
                              "precision; increase the precision", PrecisionWarning, stacklevel=2)
            root = smallest_positive_root(approx)
            if root is None:
                out.append(PRadiusEstimate("det", None, n, None, "no-real-root", prec, diag))
                continue
            value = 1 / root
            diag["successive_difference"] = None if prev is None else abs(value - prev)
            diag["trace_residual"] = traces[n] * root ** n - 1
            diag["last_term"] = abs(an * root ** n)
            out.append(PRadiusEstimate("det", value, n, root, "converged", prec, diag))
            prev = value
    return out


def derived_quantity_jp(estimate, p, prec: int | None = None):
    """``(p + 1)/p - log2(rho_p)/p``, the regularity exponent tabulated by Jungers and Protasov."""
    value = estimate.value if isinstance(estimate, PRadiusEstimate) else estimate
    if prec is None:
        prec = getattr(estimate, "precision", None) or DEFAULT_PRECISION
    with working_precision(prec):
        if value is None or value <= 0:
            raise ValueError("estimate must be positive")
        p = to_mpf(parse_scalar(p))
        return (p + 1) / p - mpmath.log(value, 2) / p
