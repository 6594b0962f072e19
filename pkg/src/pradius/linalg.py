"""Arbitrary-precision matrices and the spectral primitives used by every estimator.

A :class:`Matrix` stores its entries row-major as numerators over one common
integer denominator.  When every entry is rational the numerators are Python
ints and all products stay exact; otherwise they are ``mpmath.mpf`` values
rounded at the working precision in force (see :func:`working_precision`).
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

import mpmath
import numpy as np

DEFAULT_PRECISION = 256
KRONECKER_DIM_CAP = 4096

Scalar = Union[int, Fraction, mpmath.mpf]


class PRadiusError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(PRadiusError, ValueError):
    """Matrix shapes are incompatible."""


class DominanceError(PRadiusError):
    """A matrix lacks a simple, real, strictly dominant eigenvalue."""

    def __init__(self, msg, word=None):
        if word is not None:
            msg = f"{msg} (word {','.join(map(str, word))})"
        super().__init__(msg)
        self.word = word


class ConvergenceError(PRadiusError):
    """An iterative method hit its iteration cap."""


class BudgetError(PRadiusError):
    """A computation would exceed its configured size budget."""


def working_precision(bits):
    """Context manager setting the mpmath working precision; ``None`` is a no-op."""
    if bits is None:
        return contextlib.nullcontext()
    if bits < 64:
        raise ValueError(f"precision must be at least 64 bits, got {bits}")
    return mpmath.workprec(bits)


def parse_scalar(value) -> Scalar:
    """Convert a string, int, Fraction, float or mpf to an exact rational where possible.

    Strings such as ``"1/5"``, ``"0.2"`` or ``"-3e-2"`` become exact Fractions.
    Floats are taken at their exact binary value.  Anything else not rational
    is returned as an mpf at the current precision.
    """
    if isinstance(value, mpmath.mpf):
        return value
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite entry {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            pass
        try:
            x = mpmath.mpf(text)
        except (ValueError, TypeError):
            raise ValueError(f"cannot parse {value!r} as a real number") from None
        if not mpmath.isfinite(x):
            raise ValueError(f"non-finite entry {value!r}")
        return x
    raise TypeError(f"unsupported scalar type {type(value).__name__}")


def to_mpf(x) -> mpmath.mpf:
    """Round an int, Fraction or mpf to an mpf at the current precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True, eq=False)
class Matrix:
    """A real ``dim x dim`` matrix equal to ``num / den`` entrywise."""

    dim: int
    num: tuple
    den: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("dimension must be at least 1")
        if len(self.num) != self.dim * self.dim:
            raise DimensionError(f"expected {self.dim * self.dim} entries, got {len(self.num)}")
        if not isinstance(self.den, int) or self.den < 1:
            raise ValueError("denominator must be a positive int")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        """Build from nested rows of anything :func:`parse_scalar` accepts."""
        rows = [list(r) for r in rows]
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise DimensionError("matrix must be square and non-empty")
        entries = [parse_scalar(x) for r in rows for x in r]
        return cls.from_entries(d, entries)

    @classmethod
    def from_entries(cls, dim: int, entries: Sequence[Scalar]) -> "Matrix":
        if all(isinstance(x, (int, Fraction)) for x in entries):
            fr = [Fraction(x) for x in entries]
            den = reduce(math.lcm, (x.denominator for x in fr), 1)
            return cls(dim, tuple(int(x * den) for x in fr), den)
        vals = tuple(to_mpf(x) for x in entries)
        if not all(mpmath.isfinite(x) for x in vals):
            raise ValueError("matrix entries must be finite")
        return cls(dim, vals, 1)

    @classmethod
    def identity(cls, dim: int) -> "Matrix":
        return cls(dim, tuple(int(i == j) for i in range(dim) for j in range(dim)), 1)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, int) for x in self.num)

    def __getitem__(self, ij):
        i, j = ij
        x = self.num[i * self.dim + j]
        if isinstance(x, int):
            return Fraction(x, self.den)
        return x / self.den

    def rows(self) -> list:
        return [[self[i, j] for j in range(self.dim)] for i in range(self.dim)]

    def entries(self) -> list:
        return [self[i, j] for i in range(self.dim) for j in range(self.dim)]

    def to_mpmath(self) -> mpmath.matrix:
        return mpmath.matrix([[to_mpf(x) for x in r] for r in self.rows()])

    def to_numpy(self) -> np.ndarray:
        d = self.dim
        return np.array([float(x) for x in self.num], dtype=float).reshape(d, d) / float(self.den)

    def transpose(self) -> "Matrix":
        d = self.dim
        return Matrix(d, tuple(self.num[j * d + i] for i in range(d) for j in range(d)), self.den)

    def scaled(self, c) -> "Matrix":
        c = parse_scalar(c)
        return Matrix.from_entries(self.dim, [c * x for x in self.entries()])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.dim != other.dim:
            raise DimensionError(f"cannot add {self.dim}x{self.dim} and {other.dim}x{other.dim}")
        g = math.gcd(self.den, other.den)
        fa, fb = other.den // g, self.den // g
        num = tuple(a * fa + b * fb for a, b in zip(self.num, other.num))
        return Matrix(self.dim, num, self.den * fa)

    def __eq__(self, other):
        if not isinstance(other, Matrix) or other.dim != self.dim:
            return NotImplemented
        return all(a * other.den == b * self.den for a, b in zip(self.num, other.num))

    __hash__ = None

    def __repr__(self):
        def fmt(x):
            return str(x) if isinstance(x, Fraction) else mpmath.nstr(x, 12)
        body = "; ".join(", ".join(fmt(x) for x in r) for r in self.rows())
        return f"Matrix([{body}])"


def _mul_flat(a: tuple, b: tuple, d: int) -> tuple:
    if d == 2:
        a0, a1, a2, a3 = a
        b0, b1, b2, b3 = b
        return (a0 * b0 + a1 * b2, a0 * b1 + a1 * b3, a2 * b0 + a3 * b2, a2 * b1 + a3 * b3)
    return tuple(
        sum(a[i * d + k] * b[k * d + j] for k in range(d))
        for i in range(d)
        for j in range(d)
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Return the product ``a @ b``; exact when both factors are exact."""
    if a.dim != b.dim:
        raise DimensionError(f"cannot multiply {a.dim}x{a.dim} by {b.dim}x{b.dim}")
    return Matrix(a.dim, _mul_flat(a.num, b.num, a.dim), a.den * b.den)


@dataclass(frozen=True)
class MatrixTuple:
    """The tuple ``(A_1, ..., A_N)`` with optional probability weights."""

    matrices: tuple
    weights: tuple | None = None
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        mats = tuple(self.matrices)
        object.__setattr__(self, "matrices", mats)
        if not mats:
            raise ValueError("a matrix tuple needs at least one matrix")
        d = mats[0].dim
        if any(m.dim != d for m in mats):
            raise DimensionError("all matrices must share one dimension")
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.weights is not None:
            w = tuple(parse_scalar(x) for x in self.weights)
            object.__setattr__(self, "weights", w)
            if len(w) != len(mats):
                raise ValueError(f"expected {len(mats)} weights, got {len(w)}")
            if any(x <= 0 for x in w):
                raise ValueError("weights must be positive")
            with working_precision(self.precision):
                total = sum(to_mpf(x) for x in w)
                if abs(total - 1) > mpmath.ldexp(1, -self.precision // 2):
                    raise ValueError(f"weights must sum to 1, got {mpmath.nstr(total, 20)}")

    @classmethod
    def from_rows(cls, matrices: Iterable, weights=None, precision: int = DEFAULT_PRECISION):
        with working_precision(precision):
            mats = tuple(m if isinstance(m, Matrix) else Matrix.from_rows(m) for m in matrices)
        return cls(mats, None if weights is None else tuple(weights), precision)

    @property
    def count(self) -> int:
        return len(self.matrices)

    @property
    def dim(self) -> int:
        return self.matrices[0].dim

    @property
    def exact(self) -> bool:
        return all(m.exact for m in self.matrices)

    def with_precision(self, bits: int) -> "MatrixTuple":
        return MatrixTuple(self.matrices, self.weights, bits)

    def with_weights(self, weights) -> "MatrixTuple":
        return MatrixTuple(self.matrices, None if weights is None else tuple(weights), self.precision)

    def scaled(self, c) -> "MatrixTuple":
        with working_precision(self.precision):
            return MatrixTuple(tuple(m.scaled(c) for m in self.matrices), self.weights, self.precision)

    def conjugated(self, x: Matrix, x_inverse: Matrix | None = None) -> "MatrixTuple":
        """Return the tuple ``X^{-1} A_i X``."""
        with working_precision(self.precision):
            xi = inverse(x) if x_inverse is None else x_inverse
            mats = tuple(xi @ m @ x for m in self.matrices)
        return MatrixTuple(mats, self.weights, self.precision)

    def absorb_weights(self, p) -> "MatrixTuple":
        """Unweighted tuple ``p_i^{1/p} A_i`` with the same weighted p-radius."""
        if self.weights is None:
            return self
        with working_precision(self.precision):
            p = to_mpf(parse_scalar(p))
            mats = tuple(
                Matrix(m.dim, tuple(mpmath.power(to_mpf(w), 1 / p) * x for x in m.num), m.den)
                for m, w in zip(self.matrices, self.weights)
            )
        return MatrixTuple(mats, None, self.precision)


def inverse(a: Matrix) -> Matrix:
    """Exact inverse for rational matrices, mpmath LU otherwise."""
    if a.exact:
        d = a.dim
        m = [[Fraction(a.num[i * d + j]) for j in range(d)] + [Fraction(int(i == j)) for j in range(d)]
             for i in range(d)]
        for c in range(d):
            piv = next((r for r in range(c, d) if m[r][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            m[c], m[piv] = m[piv], m[c]
            inv_p = 1 / m[c][c]
            m[c] = [x * inv_p for x in m[c]]
            for r in range(d):
                if r != c and m[r][c] != 0:
                    f = m[r][c]
                    m[r] = [x - f * y for x, y in zip(m[r], m[c])]
        return Matrix.from_entries(d, [m[i][d + j] * a.den for i in range(d) for j in range(d)])
    inv = mpmath.inverse(a.to_mpmath())
    return Matrix.from_entries(a.dim, [inv[i, j] for i in range(a.dim) for j in range(a.dim)])


# ---------------------------------------------------------------------------
# characteristic polynomials and spectral data


def charpoly_numerator(a: Matrix) -> tuple:
    """Coefficients ``(c_1, ..., c_d)`` of ``det(xI - M) = x^d + c_1 x^{d-1} + ... + c_d``
    where ``M = den * a`` is the numerator matrix.

    Integer matrices give exact integer coefficients (Faddeev-LeVerrier with
    exact division).
    """
    d, num = a.dim, a.num
    if d == 1:
        return (-num[0],)
    if d == 2:
        return (-(num[0] + num[3]), num[0] * num[3] - num[1] * num[2])
    exact = a.exact
    coeffs = []
    mk = tuple(0 for _ in range(d * d))
    c_prev = 1
    for k in range(1, d + 1):
        mk = list(_mul_flat(num, mk, d))
        for i in range(d):
            mk[i * d + i] += c_prev
        mk = tuple(mk)
        am = _mul_flat(num, mk, d)
        tr = sum(am[i * d + i] for i in range(d))
        c = -tr // k if exact else -tr / k
        coeffs.append(c)
        c_prev = c
    return tuple(coeffs)


def _horner(coeffs, x):
    """Evaluate the monic polynomial with trailing coefficients ``coeffs`` and its derivative."""
    val, der = mpmath.mpf(1), mpmath.mpf(0)
    for c in coeffs:
        der = der * x + val
        val = val * x + c
    return val, der


@dataclass(frozen=True)
class SpectralData:
    """Leading-eigenvalue data of one matrix.

    ``eigen_ratio_product`` is ``prod_{j>=2} (1 - lambda_j/lambda_1)^{-1}``, which
    equals ``lambda1**(d-1) / char_deriv``.
    """

    lambda1: mpmath.mpf
    rho: mpmath.mpf
    char_deriv: mpmath.mpf
    eigen_ratio_product: mpmath.mpf
    subdominant_ratio: float = field(default=0.0, compare=False)


def _dominance_threshold():
    return 1 - mpmath.ldexp(1, -mpmath.mp.prec // 4)


def spectral_from_charpoly(coeffs: tuple, den: int, d: int, float_matrix=None) -> SpectralData:
    """Spectral data of ``M / den`` given the characteristic polynomial of ``M``.

    ``float_matrix`` (a numpy array of ``M / den``) supplies the starting
    estimate for ``d >= 3``; it is only consulted on that path.
    """
    if d == 1:
        lam = -to_mpf(coeffs[0]) / den
        one = mpmath.mpf(1)
        return SpectralData(lam, abs(lam), one, one, 0.0)
    if d == 2:
        b, c = coeffs
        tr = -b
        disc = tr * tr - 4 * c
        if disc <= 0:
            kind = "complex" if disc < 0 else "repeated"
            raise DominanceError(f"leading eigenvalue is {kind}")
        sq = mpmath.sqrt(disc)
        s = 1 if tr >= 0 else -1
        lam_num = (to_mpf(tr) + s * sq) / 2
        lam2_num = to_mpf(c) / lam_num
        ratio = abs(lam2_num / lam_num)
        if ratio > _dominance_threshold():
            raise DominanceError("leading eigenvalue is not strictly dominant")
        lam = lam_num / den
        deriv = s * sq / den
        return SpectralData(lam, abs(lam), deriv, lam / deriv, float(ratio))
    if float_matrix is None:
        raise ValueError("a float estimate of the matrix is required for d >= 3")
    ev = np.linalg.eigvals(float_matrix)
    ev = ev[np.argsort(-np.abs(ev))]
    lead = ev[0]
    if abs(lead) == 0:
        raise DominanceError("matrix has zero spectral radius")
    if abs(lead.imag) > 1e-8 * abs(lead):
        raise DominanceError("leading eigenvalue is not real")
    ratio = float(abs(ev[1]) / abs(lead))
    if ratio > min(float(_dominance_threshold()), 1 - 1e-9):
        raise DominanceError("leading eigenvalue is not strictly dominant")
    coeffs_mp = [to_mpf(c) for c in coeffs]
    x = mpmath.mpf(float(lead.real)) * den
    tol = mpmath.ldexp(1, -mpmath.mp.prec + 8)
    for _ in range(200):
        val, der = _horner(coeffs_mp, x)
        if der == 0:
            raise DominanceError("characteristic polynomial has a multiple leading root")
        step = val / der
        x -= step
        if abs(step) <= tol * abs(x):
            break
    else:
        raise ConvergenceError("Newton refinement of the leading eigenvalue did not converge")
    _, der = _horner(coeffs_mp, x)
    lam = x / den
    deriv = der / mpmath.mpf(den) ** (d - 1)
    return SpectralData(lam, abs(lam), deriv, lam ** (d - 1) / deriv, ratio)


def spectral_data(a: Matrix, prec: int | None = None) -> SpectralData:
    """Leading eigenvalue, spectral radius and ``p'_A(lambda_1)`` of ``a``.

    Closed form for ``d <= 2``; for larger ``d`` a double-precision estimate is
    polished by Newton's method on the characteristic polynomial.  Raises
    :class:`DominanceError` unless the leading eigenvalue is real, simple and
    strictly dominant in modulus.
    """
    with working_precision(prec):
        fm = a.to_numpy() if a.dim >= 3 else None
        return spectral_from_charpoly(charpoly_numerator(a), a.den, a.dim, fm)


def spectral_radius_float(a: Matrix, prec: int | None = None, max_iter: int = 100_000) -> mpmath.mpf:
    """Spectral radius by power iteration at the working precision.

    Starts from the all-ones vector and stops once two successive estimates
    agree to a relative ``2**(-prec + 16)``.  Suited to non-negative matrices
    or any matrix with a real dominant eigenvalue.
    """
    with working_precision(prec):
        d = a.dim
        rows = [[to_mpf(a.num[i * d + j]) for j in range(d)] for i in range(d)]
        tol = mpmath.ldexp(1, -mpmath.mp.prec + 16)
        v = [mpmath.mpf(1)] * d
        prev = None
        for _ in range(max_iter):
            w = [mpmath.fdot(r, v) for r in rows]
            est = max(abs(x) for x in w)
            if est == 0:
                return mpmath.mpf(0)
            v = [x / est for x in w]
            if prev is not None and abs(est - prev) <= tol * est:
                return est / a.den
            prev = est
        raise ConvergenceError(f"power iteration did not converge in {max_iter} steps "
                               "(oscillatory spectrum?)")


def kronecker_power(a: Matrix, k: int, cap: int = KRONECKER_DIM_CAP) -> Matrix:
    """The ``k``-fold Kronecker power ``a ⊗ ... ⊗ a``."""
    if k < 1:
        raise ValueError("Kronecker exponent must be at least 1")
    if a.dim ** k > cap:
        raise BudgetError(f"Kronecker power has dimension {a.dim ** k} > cap {cap}")
    result = a
    for _ in range(k - 1):
        result = _kron(result, a)
    return result


def _kron(a: Matrix, b: Matrix) -> Matrix:
    da, db = a.dim, b.dim
    d = da * db
    num = [0] * (d * d)
    for i in range(da):
        for j in range(da):
            x = a.num[i * da + j]
            for r in range(db):
                base = (i * db + r) * d + j * db
                for s in range(db):
                    num[base + s] = x * b.num[r * db + s]
    return Matrix(d, tuple(num), a.den * b.den)


class ExactSum:
    """Exact accumulator for binary floating-point values.

    Every finite mpf is a dyadic rational, so sums are kept as an integer
    mantissa over a power of two and rounded once by :meth:`value`.  The
    result is independent of summation order.
    """

    __slots__ = ("man", "exp")

    def __init__(self):
        self.man = 0
        self.exp = None

    def add(self, x, times: int = 1):
        """Add ``times * x`` exactly."""
        if isinstance(x, int):
            self._add_raw(x * times, 0)
            return
        sign, man, exp, _ = mpmath.mpf(x)._mpf_
        if not man:
            if exp:
                raise ValueError("cannot accumulate a non-finite value")
            return
        self._add_raw((-int(man) if sign else int(man)) * times, exp)

    def _add_raw(self, man, exp):
        if self.exp is None:
            self.man, self.exp = man, exp
        elif exp >= self.exp:
            self.man += man << (exp - self.exp)
        else:
            self.man = (self.man << (self.exp - exp)) + man
            self.exp = exp

    def merge(self, other: "ExactSum"):
        if other.exp is not None:
            self._add_raw(other.man, other.exp)

    def value(self) -> mpmath.mpf:
        if self.exp is None:
            return mpmath.mpf(0)
        return mpmath.mpf((self.man, self.exp))

