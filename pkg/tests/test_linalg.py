from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pradius.linalg import (
    BudgetError,
    DimensionError,
    DominanceError,
    ExactSum,
    Matrix,
    MatrixTuple,
    charpoly_numerator,
    inverse,
    kronecker_power,
    parse_scalar,
    spectral_data,
    spectral_radius_float,
    working_precision,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def matrices(d):
    return st.lists(small, min_size=d * d, max_size=d * d).map(lambda xs: Matrix.from_entries(d, xs))


def test_parse_scalar_is_exact():
    assert parse_scalar("1/5") == Fraction(1, 5)
    assert parse_scalar("0.2") == Fraction(1, 5)
    assert parse_scalar("-3e-2") == Fraction(-3, 100)
    assert parse_scalar(3) == 3
    with pytest.raises(ValueError):
        parse_scalar("abc")


def test_matrix_common_denominator():
    m = Matrix.from_rows([["1/5", "0"], ["1/5", "3/5"]])
    assert m.den == 5 and m.num == (1, 0, 1, 3)
    assert m[1, 1] == Fraction(3, 5)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        Matrix.from_rows([[1, 2]])
    a = Matrix.from_rows([[1]])
    b = Matrix.from_rows([[1, 0], [0, 1]])
    with pytest.raises(DimensionError):
        a @ b
    with pytest.raises(DimensionError):
        MatrixTuple((a, b))


def test_weights_must_be_probabilities():
    rows = [[[1, 0], [0, 1]], [[1, 1], [0, 1]]]
    MatrixTuple.from_rows(rows, ["1/3", "2/3"])
    with pytest.raises(ValueError):
        MatrixTuple.from_rows(rows, ["1/3", "1/3"])
    with pytest.raises(ValueError):
        MatrixTuple.from_rows(rows, ["0", "1"])


def test_working_precision_rejects_low_values():
    with pytest.raises(ValueError):
        working_precision(32)


@settings(max_examples=60, deadline=None)
@given(matrices(2), matrices(2), matrices(2))
def test_product_is_exact_and_associative(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)
    fa, fb = np.array(a.rows(), dtype=object), np.array(b.rows(), dtype=object)
    assert (a @ b).rows() == (fa @ fb).tolist()


@settings(max_examples=60, deadline=None)
@given(matrices(3))
def test_exact_inverse(a):
    if np.linalg.matrix_rank(np.array(a.rows(), dtype=float)) < 3:
        return
    assert a @ inverse(a) == Matrix.identity(3)


@settings(max_examples=60, deadline=None)
@given(matrices(3))
def test_charpoly_matches_numpy(a):
    # numpy.poly builds the same coefficients from the eigenvalues
    num = np.array(a.num, dtype=float).reshape(3, 3)
    ref = np.poly(num)[1:]
    got = np.array([float(c) for c in charpoly_numerator(a)])
    assert np.allclose(got, ref, rtol=1e-9, atol=1e-6 * max(1.0, np.abs(ref).max()))


def test_spectral_data_closed_form():
    a = Matrix.from_rows([[2, 1], [1, 1]])
    with working_precision(256):
        sd = spectral_data(a)
        lam = (3 + mpmath.sqrt(5)) / 2
        assert abs(sd.lambda1 - lam) < mpmath.mpf(2) ** -250
        assert abs(sd.char_deriv - mpmath.sqrt(5)) < mpmath.mpf(2) ** -250


def test_spectral_data_three_by_three_against_mpmath_eig():
    a = Matrix.from_rows([["1/2", "1/3", "1/7"], ["1/5", "2/3", "1/11"], ["1/13", "1/4", "3/4"]])
    with working_precision(256):
        sd = spectral_data(a)
        ev = mpmath.eig(a.to_mpmath(), left=False, right=False)
        ev = sorted(ev, key=lambda z: -abs(z))
        lam = mpmath.re(ev[0])
        deriv = mpmath.re((ev[0] - ev[1]) * (ev[0] - ev[2]))
        assert abs(sd.lambda1 - lam) < mpmath.mpf(2) ** -200
        assert abs(sd.char_deriv - deriv) < mpmath.mpf(2) ** -200


def test_dominance_errors():
    with pytest.raises(DominanceError):
        spectral_data(Matrix.from_rows([[0, -1], [1, 0]]))
    with pytest.raises(DominanceError):
        spectral_data(Matrix.from_rows([[1, 0], [0, 1]]))
    with pytest.raises(DominanceError):
        spectral_data(Matrix.from_rows([[1, 0], [0, -1]]))


def test_kronecker_power_and_budget():
    a = Matrix.from_rows([["1/5", 0], ["1/5", "3/5"]])
    k2 = kronecker_power(a, 2)
    ref = np.kron(a.to_numpy(), a.to_numpy())
    assert np.allclose(k2.to_numpy(), ref)
    with pytest.raises(BudgetError):
        kronecker_power(a, 13)


def test_power_iteration():
    a = Matrix.from_rows([[2, 1], [1, 1]])
    with working_precision(256):
        assert abs(spectral_radius_float(a) - (3 + mpmath.sqrt(5)) / 2) < mpmath.mpf(2) ** -230


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=40),
       st.randoms(use_true_random=False))
def test_exact_sum_is_order_independent(xs, rnd):
    with working_precision(256):
        a, b = ExactSum(), ExactSum()
        for x in xs:
            a.add(mpmath.mpf(x))
        shuffled = list(xs)
        rnd.shuffle(shuffled)
        half = len(shuffled) // 2
        c = ExactSum()
        for x in shuffled[:half]:
            b.add(mpmath.mpf(x))
        for x in shuffled[half:]:
            c.add(mpmath.mpf(x))
        b.merge(c)
        assert a.value() == b.value()
        assert a.value() == mpmath.mpf(sum(Fraction(x) for x in xs).numerator) / sum(
            Fraction(x) for x in xs).denominator
