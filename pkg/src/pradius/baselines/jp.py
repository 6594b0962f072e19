"""Convex-optimisation bounds of Jungers and Protasov for non-negative tuples.

With ``P_w = A_w`` over all words of length ``n``,

    a_p(n) = inf_u  sum_w (max_i sum_j (P_w)_ij e^(u_j - u_i))^p
    b_p(n) = inf_v  max_j sum_w (sum_i (P_w)_ij e^(v_i - v_j))^p

and for ``p >= 1``

    max(d^(-p/n) a^(1/n), d^((1-p)/n) b^(1/n))  <=  rho_p  <=  b^(1/n).

Both objectives are convex in the exponents; they are minimised in log form
by coordinate descent with geometric step control, gauge ``u_1 = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from ..linalg import BudgetError, MatrixTuple

SOLVER_TOLERANCE = 1e-9
DEFAULT_BUDGET = 1 << 22


@dataclass(frozen=True)
class JPBounds:
    n: int
    a_value: float
    b_value: float
    upper: float
    lower: float
    solver_tolerance: float = SOLVER_TOLERANCE


def word_products(tup: MatrixTuple, n: int, *, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Float array of shape ``(N**n, d, d)`` holding ``A_w`` in lexicographic word order."""
    count = tup.count ** n
    if count > budget:
        raise BudgetError(f"JP bounds: {tup.count}^{n} products exceed budget {budget}")
    mats = np.stack([m.to_numpy() for m in tup.matrices])
    prods = mats
    for _ in range(n - 1):
        prods = np.einsum("aij,bjk->baik", mats, prods).reshape(-1, tup.dim, tup.dim)
    return prods


def word_log_weights(tup: MatrixTuple, n: int) -> np.ndarray | None:
    if tup.weights is None:
        return None
    logw = np.log([float(w) for w in tup.weights])
    total = logw
    for _ in range(n - 1):
        total = (total[:, None] + logw[None, :]).reshape(-1)
    return total


def _log_a(prods, p, logw):
    def objective(free):
        u = np.concatenate(([0.0], free))
        e = np.exp(u)
        with np.errstate(divide="ignore"):
            rows = np.log((prods * (e[None, None, :] / e[None, :, None])).sum(axis=2).max(axis=1))
        terms = p * rows if logw is None else p * rows + logw
        return float(logsumexp(terms))
    return objective


def _log_b(prods, p, logw):
    def objective(free):
        v = np.concatenate(([0.0], free))
        e = np.exp(v)
        with np.errstate(divide="ignore"):
            cols = np.log((prods * (e[None, :, None] / e[None, None, :])).sum(axis=1))
        terms = p * cols if logw is None else p * cols + logw[:, None]
        return float(logsumexp(terms, axis=0).max())
    return objective


def _coordinate_descent(f, dim: int, *, min_step=1e-11, max_evals=20_000):
    x = np.zeros(dim)
    fx = f(x)
    if dim == 0:
        return x, fx
    step = 1.0
    evals = 1
    while step > min_step and evals < max_evals:
        moved = False
        for k in range(dim):
            for sign in (1.0, -1.0):
                y = x.copy()
                y[k] += sign * step
                fy = f(y)
                evals += 1
                if fy < fx:
                    x, fx, moved = y, fy, True
                    break
        step = min(step * 2, 16.0) if moved else step / 2
    return x, fx


def _minimise(f, dim: int):
    x, fx = _coordinate_descent(f, dim)
    if dim >= 2:
        # coordinate moves can stall on the kinks of the max; polish jointly
        res = minimize(f, x, method="Nelder-Mead",
                       options={"xatol": 1e-11, "fatol": 1e-13, "maxiter": 20_000})
        if res.fun < fx:
            x, fx = res.x, float(res.fun)
    return fx


def jp_bounds(tup: MatrixTuple, p, n: int, *, budget: int = DEFAULT_BUDGET) -> JPBounds:
    """Rigorous bracket for ``rho_p`` from the two convex programmes at order ``n``."""
    p = float(p)
    if p < 1:
        raise ValueError("Jungers-Protasov bounds need p >= 1")
    if n < 1:
        raise ValueError("order must be at least 1")
    if any(x < 0 for m in tup.matrices for x in m.num):
        raise ValueError("Jungers-Protasov bounds need entrywise non-negative matrices")
    d = tup.dim
    prods = word_products(tup, n, budget=budget)
    logw = word_log_weights(tup, n)
    log_a = _minimise(_log_a(prods, p, logw), d - 1)
    log_b = _minimise(_log_b(prods, p, logw), d - 1)
    log_d = math.log(d)
    upper = math.exp(log_b / n)
    lower = max(math.exp((log_a - p * log_d) / n), math.exp((log_b + (1 - p) * log_d) / n))
    return JPBounds(n, math.exp(log_a), math.exp(log_b), upper, lower)
