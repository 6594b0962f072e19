"""Pre-flight checks for the hypotheses of the determinant method.

None of these certify multipositivity.  Positivity (possibly after a
supplied conjugation) is sufficient; the domination exponent is a finite-``n``
heuristic for the asymptotic singular-value gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .linalg import (
    Matrix,
    MatrixTuple,
    _horner,
    _mul_flat,
    charpoly_numerator,
    inverse,
    to_mpf,
    working_precision,
)
from .words import visit_products

DISCLAIMER = ("validation is heuristic: it does not certify that the tuple strictly "
              "preserves a multicone")


@dataclass(frozen=True)
class Conjugator:
    x: Matrix
    x_inverse: Matrix

    @classmethod
    def from_matrix(cls, x: Matrix) -> "Conjugator":
        try:
            conj = cls(x, inverse(x))
        except ZeroDivisionError:
            raise ValueError("conjugator is singular") from None
        prod = conj.x @ conj.x_inverse
        ident = Matrix.identity(x.dim)
        if not prod.exact:
            tol = mpmath.ldexp(1, -mpmath.mp.prec + 16)
            if any(abs(to_mpf(a) - to_mpf(b)) > tol for a, b in zip(prod.entries(), ident.entries())):
                raise ValueError("conjugator inverse is inaccurate")
        elif prod != ident:
            raise ValueError("conjugator inverse is wrong")
        return conj

    def apply(self, tup: MatrixTuple) -> MatrixTuple:
        return tup.conjugated(self.x, self.x_inverse)


@dataclass(frozen=True)
class ValidationReport:
    positive: bool
    conjugated_positive: bool | None = None
    domination_exponent: mpmath.mpf | None = None
    domination_order: int | None = None
    verdict: str = "inconclusive"
    zero_radius: bool = False
    notes: tuple = ()


def check_positive(tup: MatrixTuple) -> bool:
    """True iff every entry of every matrix is strictly positive."""
    return all(x > 0 for m in tup.matrices for x in m.num)


def _gram_extremes(prod: Matrix):
    """``(sigma_1^2, sigma_2^2)`` of the numerator matrix."""
    d = prod.dim
    num = prod.num
    gram = _mul_flat(tuple(num[j * d + i] for i in range(d) for j in range(d)), num, d)
    if d == 2:
        tr = gram[0] + gram[3]
        det = gram[0] * gram[3] - gram[1] * gram[2]
        if det == 0:
            raise ZeroDivisionError("singular product")
        top = (to_mpf(tr) + mpmath.sqrt(max(tr * tr - 4 * det, 0))) / 2
        second = to_mpf(det) / top
        return top, second
    gm = Matrix(d, gram, 1)
    coeffs = [to_mpf(c) for c in charpoly_numerator(gm)]
    if coeffs[-1] == 0:
        raise ZeroDivisionError("singular product")
    est = np.sort(np.linalg.eigvalsh(gm.to_numpy()))[::-1]
    out = []
    tol = mpmath.ldexp(1, -mpmath.mp.prec + 8)
    for x0 in est[:2]:
        x = mpmath.mpf(float(x0))
        for _ in range(200):
            val, der = _horner(coeffs, x)
            if der == 0:
                break
            step = val / der
            x -= step
            if abs(step) <= tol * abs(x):
                break
        out.append(x)
    return out[0], min(out[1], out[0])


def check_domination(tup: MatrixTuple, n: int) -> mpmath.mpf:
    """``(1/n) log max_{|w|=n} sigma_2(A_w) / sigma_1(A_w)``.

    Negative values are consistent with a dominated (multipositive) tuple.
    Raises :class:`ZeroDivisionError` if a product is singular.
    """
    if tup.dim < 2:
        raise ValueError("domination needs d >= 2")
    if any(m.exact and charpoly_numerator(m)[-1] == 0 for m in tup.matrices):
        raise ZeroDivisionError("a matrix in the tuple is singular")
    cache = {}
    worst = [mpmath.mpf(0)]

    def visit(v):
        prod = v.product
        key = (prod.den, prod.num) if tup.dim > 2 or not prod.exact else None
        if key is None:
            a, b, c, e = prod.num
            key = (a * a + b * b + c * c + e * e, a * e - b * c)
        ratio = cache.get(key)
        if ratio is None:
            top, second = _gram_extremes(prod)
            ratio = second / top
            cache[key] = ratio
        if ratio > worst[0]:
            worst[0] = ratio

    with working_precision(tup.precision):
        visit_products(tup, n, visit)
        return mpmath.log(worst[0]) / (2 * n)


def zero_radius_check(tup: MatrixTuple) -> bool:
    """True iff every product of length ``d`` vanishes, in which case ``rho_p = 0``."""
    zero = [True]

    def visit(v):
        if zero[0] and any(x != 0 for x in v.product.num):
            zero[0] = False

    visit_products(tup, tup.dim, visit)
    return zero[0]


def validate(tup: MatrixTuple, conjugator: Matrix | Conjugator | None = None,
             order: int = 10) -> ValidationReport:
    """Run all checks; ``verdict`` is ``pass``, ``fail`` or ``inconclusive``.

    Pass when the tuple is positive, positive after conjugation, or has a
    domination exponent below ``-2/order`` (a heuristic margin).  Fail when
    the exponent is non-negative or the tuple has zero p-radius.
    """
    notes = [DISCLAIMER]
    zero = zero_radius_check(tup)
    positive = check_positive(tup)
    conj_pos = None
    if conjugator is not None:
        if isinstance(conjugator, Matrix):
            with working_precision(tup.precision):
                conjugator = Conjugator.from_matrix(conjugator)
        conj_pos = check_positive(conjugator.apply(tup))
    exponent = None
    if tup.dim >= 2 and not zero:
        try:
            exponent = check_domination(tup, order)
        except ZeroDivisionError:
            notes.append("domination not checked: a product is singular")
    if zero:
        verdict = "fail"
        notes.append("all products of length d vanish, so the p-radius is zero")
    elif positive or conj_pos or (exponent is not None and exponent < -mpmath.mpf(2) / order):
        verdict = "pass"
    elif exponent is not None and exponent >= 0:
        verdict = "fail"
    else:
        verdict = "inconclusive"
    return ValidationReport(positive, conj_pos, exponent, order if exponent is not None else None,
                            verdict, zero, tuple(notes))
