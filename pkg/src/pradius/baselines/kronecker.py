"""Kronecker-power identity and the log-convexity interpolation bound."""

from __future__ import annotations

import mpmath

from ..linalg import (
    KRONECKER_DIM_CAP,
    MatrixTuple,
    kronecker_power,
    parse_scalar,
    spectral_radius_float,
    to_mpf,
    working_precision,
)


def kronecker_is_exact(tup: MatrixTuple, k: int) -> bool:
    """Whether ``rho(sum A_i^{⊗k})`` equals ``rho_k`` rather than only bounding it.

    True for even ``k``, or any positive ``k`` when every matrix is entrywise
    non-negative.
    """
    if k < 1:
        return False
    if k % 2 == 0:
        return True
    return all(x >= 0 for m in tup.matrices for x in m.num)


def kronecker_estimate(tup: MatrixTuple, k: int, *, prec: int | None = None,
                       cap: int = KRONECKER_DIM_CAP) -> mpmath.mpf:
    """``rho(sum_i p_i A_i^{⊗k})`` (``p_i = 1`` without weights).

    Equals ``rho_k`` when :func:`kronecker_is_exact` holds and is an upper
    bound otherwise.  ``k = 0`` gives ``N`` (or 1 with weights).
    """
    prec = prec or tup.precision
    with working_precision(prec):
        if k == 0:
            return mpmath.mpf(tup.count if tup.weights is None else 1)
        if k < 0:
            raise ValueError("Kronecker exponent must be non-negative")
        total = None
        for i, a in enumerate(tup.matrices):
            term = kronecker_power(a, k, cap)
            if tup.weights is not None:
                term = term.scaled(tup.weights[i])
            total = term if total is None else total + term
        return spectral_radius_float(total)


def logconvex_upper(tup: MatrixTuple, p, *, prec: int | None = None,
                    cap: int = KRONECKER_DIM_CAP) -> mpmath.mpf:
    """Upper bound from log-convexity of ``p -> log rho_p`` between integer neighbours.

    With ``f = floor(p)``, ``rho_p <= rho_f^(f+1-p) rho_{f+1}^(p-f)``, both
    endpoints from the Kronecker identity.  Integer ``p`` returns the
    Kronecker value itself.
    """
    prec = prec or tup.precision
    with working_precision(prec):
        p = to_mpf(parse_scalar(p))
        if p <= 0:
            raise ValueError("log-convexity bound needs p > 0")
        f = int(mpmath.floor(p))
        if p == f:
            return kronecker_estimate(tup, f, prec=prec, cap=cap)
        lo = kronecker_estimate(tup, f, prec=prec, cap=cap)
        hi = kronecker_estimate(tup, f + 1, prec=prec, cap=cap)
        return lo ** (f + 1 - p) * hi ** (p - f)

