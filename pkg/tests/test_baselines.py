import mpmath
import numpy as np
import pytest

from pradius import BudgetError, MatrixTuple, estimate_p_radius
from pradius.baselines import (
    MonteCarloConfig,
    NaiveConfig,
    jp_bounds,
    kronecker_estimate,
    kronecker_is_exact,
    logconvex_upper,
    mesh_estimate,
    mesh_operator,
    monte_carlo_estimate,
    naive_bounds,
    naive_lower,
    naive_upper,
    spectral_norm,
)
from pradius.linalg import Matrix, working_precision

RHO = mpmath.mpf("0.19773298680753190957")
DIAG = MatrixTuple.from_rows([[[2, 0], [0, 1]]])


def test_spectral_norm_matches_svd():
    a = Matrix.from_rows([["1/5", "0"], ["1/5", "3/5"]])
    with working_precision(256):
        assert abs(spectral_norm(a) - np.linalg.norm(a.to_numpy(), 2)) < 1e-15


def test_naive_examples():
    with working_precision(256):
        assert abs(naive_upper(DIAG, 1, 4) - 2) < mpmath.mpf(2) ** -240
        kpd = NaiveConfig.for_dimension("3.5", 2).kpd
        assert abs(kpd - mpmath.mpf(2) ** mpmath.mpf("12.5")) < mpmath.mpf(2) ** -230


def test_naive_bounds_bracket_and_running_minimum(jp_pair):
    pairs = naive_bounds(jp_pair, "3.5", 10, 6)
    uppers = [b.upper for b in pairs]
    lowers = [b.lower for b in pairs if b.lower is not None]
    assert max(lowers) < RHO < min(uppers)
    running = [min(uppers[: i + 1]) for i in range(len(uppers))]
    assert all(a >= b for a, b in zip(running, running[1:]))


def test_naive_rejects_bad_input(jp_pair):
    with pytest.raises(ValueError):
        naive_upper(jp_pair, 0, 3)
    with pytest.raises(BudgetError):
        naive_lower(jp_pair, "3.5", 12, budget=1 << 16)


def test_naive_upper_vanishes_on_nilpotent_pair():
    nil = MatrixTuple.from_rows([[[0, 1], [0, 0]], [[0, 3], [0, 0]]])
    assert naive_upper(nil, 2, 2) == 0


def test_kronecker_exactness_rules(jp_pair):
    assert kronecker_is_exact(jp_pair, 3)
    signed = MatrixTuple.from_rows([[[1, -1], [0, 1]]])
    assert not kronecker_is_exact(signed, 3)
    assert kronecker_is_exact(signed, 4)


def test_kronecker_single_matrix_and_zero():
    a = MatrixTuple.from_rows([[[2, 1], [1, 1]]])
    with working_precision(256):
        lam = (3 + mpmath.sqrt(5)) / 2
        assert abs(kronecker_estimate(a, 3) - lam ** 3) < mpmath.mpf(2) ** -220
        assert kronecker_estimate(a, 0) == 1
        assert abs(logconvex_upper(a, "2.25") - lam ** mpmath.mpf("2.25")) < mpmath.mpf(2) ** -200


def test_kronecker_matches_numpy_and_determinant(jp_pair):
    with working_precision(256):
        k2 = kronecker_estimate(jp_pair, 2)
        mats = [m.to_numpy() for m in jp_pair.matrices]
        ref = max(abs(np.linalg.eigvals(sum(np.kron(m, m) for m in mats))))
        assert abs(float(k2) - ref) < 1e-14
        det = estimate_p_radius(jp_pair, 2, 10)[-1].value
        assert abs(k2 - det) < mpmath.mpf("1e-12")


def test_logconvex_endpoints_and_order(jp_pair):
    with working_precision(256):
        assert logconvex_upper(jp_pair, 3) == kronecker_estimate(jp_pair, 3)
        assert logconvex_upper(jp_pair, "3.5") >= RHO
        with pytest.raises(ValueError):
            logconvex_upper(jp_pair, 0)


def test_jp_bounds_bracket_and_monotone_upper(jp_pair):
    prev = None
    for n in range(1, 7):
        b = jp_bounds(jp_pair, 3.5, n)
        assert b.a_value > 0 and b.b_value > 0
        assert b.lower <= float(RHO) <= b.upper + b.solver_tolerance
        if prev is not None:
            assert b.upper <= prev + 1e-9
        prev = b.upper


def test_jp_scalars_collapse_to_exact_value():
    scalars = MatrixTuple.from_rows([[["1/2"]], [["1/3"]]])
    b = jp_bounds(scalars, 2, 3)
    assert b.upper == pytest.approx(13 / 36, rel=1e-12)
    assert b.lower == pytest.approx(13 / 36, rel=1e-12)


def test_jp_preconditions(jp_pair):
    with pytest.raises(ValueError):
        jp_bounds(jp_pair, 0.5, 2)
    with pytest.raises(ValueError):
        jp_bounds(MatrixTuple.from_rows([[[1, -1], [0, 1]]]), 2, 2)
    with pytest.raises(BudgetError):
        jp_bounds(jp_pair, 3.5, 12, budget=1000)


def test_mesh_rows_have_one_entry_per_matrix(jp_pair):
    op = mesh_operator(jp_pair, 3.5, 50)
    b1 = mesh_operator(MatrixTuple((jp_pair.matrices[0],)), 3.5, 50).matrix
    assert (np.diff(b1.indptr) == 1).all()
    assert op.matrix.nnz <= 100 and (op.matrix.data > 0).all()


def test_mesh_diagonal_fixed_point():
    for size in (4, 10, 37):
        assert mesh_estimate(DIAG, 1, size, sampling="endpoint") == pytest.approx(2, rel=1e-12)


def test_mesh_ladder_differences_shrink(jp_pair):
    values = [mesh_estimate(jp_pair, 3.5, m) for m in (10, 100, 1000, 10000)]
    diffs = [abs(a - b) for a, b in zip(values, values[1:])]
    assert all(a > b for a, b in zip(diffs, diffs[1:]))


def test_mesh_preconditions(jp_pair):
    with pytest.raises(ValueError):
        mesh_estimate(MatrixTuple.from_rows([[[1, 0], [0, 0]]]), 1, 10, sampling="endpoint")
    with pytest.raises(ValueError):
        mesh_estimate(MatrixTuple.from_rows([[[1]]]), 1, 10)
    with pytest.raises(ValueError):
        mesh_estimate(jp_pair, 1, 10, sampling="random")


def test_monte_carlo_reproducible(jp_pair):
    cfg = MonteCarloConfig(200, 200, seed=42)
    assert monte_carlo_estimate(jp_pair, 3.5, cfg) == monte_carlo_estimate(jp_pair, 3.5, cfg)
    assert monte_carlo_estimate(jp_pair, 3.5, cfg) != monte_carlo_estimate(
        jp_pair, 3.5, MonteCarloConfig(200, 200, seed=43))


def test_monte_carlo_single_and_duplicated_matrix():
    a = [[2, 1], [1, 1]]
    lam = (3 + 5 ** 0.5) / 2
    single = monte_carlo_estimate(MatrixTuple.from_rows([a]), 1, MonteCarloConfig(500, 200, 3))
    double = monte_carlo_estimate(MatrixTuple.from_rows([a, a]), 1, MonteCarloConfig(500, 200, 3))
    assert single == pytest.approx(lam, abs=1e-2)
    assert double == pytest.approx(2 * lam, abs=2e-2)


def test_monte_carlo_config_validation():
    with pytest.raises(ValueError):
        MonteCarloConfig(0, 10)
