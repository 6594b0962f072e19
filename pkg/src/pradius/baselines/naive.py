"""Elementary rigorous bounds from sums of norms of products.

For ``p > 0`` and ``S_n = sum_{|w|=n} ||A_w||^p`` (spectral norm),

    (S_{nd} / (K(p,d) S_n^(d-1)))^(1/n)  <=  rho_p  <=  S_n^(1/n)

for every ``n``, with ``K(p,d) = d^(2+(d+1)p) max(d^(1-p), 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from ..linalg import (
    BudgetError,
    ExactSum,
    Matrix,
    MatrixTuple,
    _mul_flat,
    parse_scalar,
    spectral_radius_float,
    to_mpf,
    working_precision,
)
from ..words import visit_tree

DEFAULT_BUDGET = 1 << 22


@dataclass(frozen=True)
class BoundPair:
    n: int
    upper: mpmath.mpf
    lower: mpmath.mpf | None = None
    rigorous: bool = True


@dataclass(frozen=True)
class NaiveConfig:
    kpd: mpmath.mpf

    @classmethod
    def for_dimension(cls, p, d: int) -> "NaiveConfig":
        p = to_mpf(parse_scalar(p))
        d = mpmath.mpf(d)
        return cls(d ** (2 + (d + 1) * p) * max(d ** (1 - p), mpmath.mpf(1)))


def _gram_largest(num: tuple, d: int):
    """Largest eigenvalue of ``M^T M`` for the numerator matrix ``M``."""
    gram = _mul_flat(tuple(num[j * d + i] for i in range(d) for j in range(d)), num, d)
    if d == 1:
        return to_mpf(gram[0])
    if d == 2:
        tr = gram[0] + gram[3]
        det = gram[0] * gram[3] - gram[1] * gram[2]
        disc = tr * tr - 4 * det
        return (to_mpf(tr) + mpmath.sqrt(max(disc, 0))) / 2
    return spectral_radius_float(Matrix(d, gram, 1))


def spectral_norm(a: Matrix, prec: int | None = None) -> mpmath.mpf:
    """Operator 2-norm ``sqrt(rho(A^T A))``."""
    with working_precision(prec):
        return mpmath.sqrt(_gram_largest(a.num, a.dim)) / a.den


class _NormPowerAccumulator:
    def __init__(self, p, n_max, dim):
        self.half_p = p / 2
        self.p = p
        self.dim = dim
        self.sums = [ExactSum() for _ in range(n_max)]
        self.cache = {}

    def __call__(self, visit):
        prod = visit.product
        d = self.dim
        if d == 2 and prod.exact:
            a, b, c, e = prod.num
            key = (prod.den, a * a + b * b + c * c + e * e, a * e - b * c)
        else:
            key = (prod.den, prod.num)
        term = self.cache.get(key)
        if term is None:
            top = _gram_largest(prod.num, d)
            term = mpmath.power(top, self.half_p) / mpmath.power(prod.den, self.p) if top else mpmath.mpf(0)
            self.cache[key] = term
        if visit.weight != 1:
            term = term * visit.weight
        self.sums[len(visit.word) - 1].add(term)

    def result(self):
        return self.sums


def norm_power_sums(tup: MatrixTuple, p, n_max: int, *, budget: int = DEFAULT_BUDGET) -> list:
    """``[S_1, ..., S_{n_max}]`` with ``S_n = sum_{|w|=n} p_w ||A_w||^p``."""
    if tup.count ** n_max > budget:
        raise BudgetError(f"naive bounds: {tup.count}^{n_max} products exceed budget {budget}")
    with working_precision(tup.precision):
        acc = _NormPowerAccumulator(to_mpf(parse_scalar(p)), n_max, tup.dim)
        visit_tree(tup, n_max, acc)
        return [s.value() for s in acc.result()]


def _check_p(p):
    p = to_mpf(parse_scalar(p))
    if p <= 0:
        raise ValueError("naive bounds are only established for p > 0")
    return p


def _upper(sums, n):
    return sums[n - 1] ** (mpmath.mpf(1) / n)


def _lower(sums, n, d, kpd):
    s_n = sums[n - 1]
    if s_n == 0:
        return mpmath.mpf(0)
    return (sums[n * d - 1] / (kpd * s_n ** (d - 1))) ** (mpmath.mpf(1) / n)


def naive_upper(tup: MatrixTuple, p, n: int, *, budget: int = DEFAULT_BUDGET) -> mpmath.mpf:
    """``S_n^(1/n)``, an upper bound on the p-radius for every ``n``."""
    with working_precision(tup.precision):
        _check_p(p)
        return _upper(norm_power_sums(tup, p, n, budget=budget), n)


def naive_lower(tup: MatrixTuple, p, n: int, *, budget: int = DEFAULT_BUDGET) -> mpmath.mpf:
    """``(S_{nd} / (K(p,d) S_n^(d-1)))^(1/n)``, a lower bound for every ``n``.

    Needs all ``N**(n d)`` products of length ``n d``.
    """
    with working_precision(tup.precision):
        p = _check_p(p)
        d = tup.dim
        sums = norm_power_sums(tup, p, n * d, budget=budget)
        return _lower(sums, n, d, NaiveConfig.for_dimension(p, d).kpd)


def naive_bounds(tup: MatrixTuple, p, n_upper: int, n_lower: int = 0, *,
                 budget: int = DEFAULT_BUDGET) -> list:
    """Upper bounds for ``n = 1..n_upper`` and lower bounds for ``n = 1..n_lower``.

    One traversal to depth ``max(n_upper, d * n_lower)`` serves all rows.
    """
    with working_precision(tup.precision):
        p = _check_p(p)
        d = tup.dim
        depth = max(n_upper, d * n_lower)
        sums = norm_power_sums(tup, p, depth, budget=budget)
        kpd = NaiveConfig.for_dimension(p, d).kpd
        return [
            BoundPair(n, _upper(sums, n), _lower(sums, n, d, kpd) if n <= n_lower else None)
            for n in range(1, max(n_upper, n_lower) + 1)
        ]
