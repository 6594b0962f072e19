"""Finite-mesh discretisation of the transfer operator on the projective line (``d = 2``).

The line RP^1 is cut into ``n`` arcs ``[k pi/n, (k+1) pi/n)``.  Row ``j`` of
``B_i`` has a single nonzero entry ``||A_i u(theta_j)||^p`` in the column of
the arc containing the line through ``A_i u(theta_j)``, where
``u(theta) = (cos theta, sin theta)``.  The spectral radius of
``B = sum_i B_i`` approximates the p-radius.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import sparse

from ..linalg import ConvergenceError, MatrixTuple

TIE_WINDOW = 1e-9


@dataclass(frozen=True)
class MeshOperator:
    mesh_size: int
    matrix: sparse.csr_matrix
    sampling: str = "midpoint"


def _sample_angles(n: int, sampling: str) -> np.ndarray:
    if sampling == "midpoint":
        return (np.arange(n) + 0.5) * np.pi / n
    if sampling == "endpoint":
        return np.arange(n) * np.pi / n
    raise ValueError(f"unknown sampling {sampling!r}; use 'midpoint' or 'endpoint'")


def _arc_index_exact(a, j: int, n: int, sampling: str) -> int:
    """Arc index recomputed at 128 bits; used when the float angle sits on an arc boundary."""
    with mpmath.workprec(128):
        offset = mpmath.mpf(1) / 2 if sampling == "midpoint" else 0
        theta = (j + offset) * mpmath.pi / n
        u = (mpmath.cos(theta), mpmath.sin(theta))
        x = a[0, 0] * u[0] + a[0, 1] * u[1]
        y = a[1, 0] * u[0] + a[1, 1] * u[1]
        phi = mpmath.atan2(y, x)
        if phi < 0:
            phi += mpmath.pi
        pos = phi * n / mpmath.pi
        nearest = mpmath.nint(pos)
        if abs(pos - nearest) < mpmath.ldexp(1, -100):
            k = int(nearest)
        else:
            k = int(mpmath.floor(pos))
        return k % n


def mesh_operator(tup: MatrixTuple, p, mesh_size: int, *, sampling: str = "midpoint") -> MeshOperator:
    """Assemble ``B = sum_i B_i`` as a sparse matrix.

    ``sampling="midpoint"`` evaluates row ``j`` at the centre of arc ``j``;
    ``"endpoint"`` uses the left end ``j pi/n``.  Images landing exactly on an
    arc boundary belong to the arc that starts there.
    """
    if tup.dim != 2:
        raise ValueError("the mesh method is implemented for 2x2 matrices only")
    n = int(mesh_size)
    if n < 1:
        raise ValueError("mesh size must be positive")
    for idx, m in enumerate(tup.matrices):
        a, b, c, d = m.num
        if a * d - b * c == 0:
            raise ValueError(f"matrix {idx + 1} is singular; the mesh method needs invertible matrices")
    p = float(p)
    theta = _sample_angles(n, sampling)
    u = np.stack([np.cos(theta), np.sin(theta)])
    rows, cols, vals = [], [], []
    for idx, m in enumerate(tup.matrices):
        a = m.to_numpy()
        v = a @ u
        norms = np.hypot(v[0], v[1])
        if np.any(norms == 0):
            raise ValueError(f"matrix {idx + 1} maps a mesh direction to zero (not invertible)")
        phi = np.arctan2(v[1], v[0])
        phi = np.where(phi < 0, phi + np.pi, phi)
        pos = phi * n / np.pi
        k = np.floor(pos).astype(np.int64)
        near = np.abs(pos - np.rint(pos)) < TIE_WINDOW
        if near.any():
            with mpmath.workprec(128):
                mp_a = m.to_mpmath()
            for j in np.flatnonzero(near):
                k[j] = _arc_index_exact(mp_a, int(j), n, sampling)
        k %= n
        w = norms ** p
        if tup.weights is not None:
            w = w * float(tup.weights[idx])
        rows.append(np.arange(n))
        cols.append(k)
        vals.append(w)
    b = sparse.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(n, n))
    return MeshOperator(n, b, sampling)


def sparse_spectral_radius(b, *, tol: float = 1e-14, max_iter: int = 100_000) -> float:
    """Power iteration from the all-ones vector for a non-negative sparse matrix."""
    x = np.ones(b.shape[0])
    prev = None
    for _ in range(max_iter):
        y = b @ x
        est = float(np.abs(y).max())
        if est == 0.0:
            return 0.0
        x = y / est
        if prev is not None and abs(est - prev) <= tol * est:
            return est
        prev = est
    raise ConvergenceError(f"mesh power iteration did not converge in {max_iter} steps")


def mesh_estimate(tup: MatrixTuple, p, mesh_size: int, *, sampling: str = "midpoint") -> float:
    """Spectral radius of the mesh operator, an approximation to ``rho_p``."""
    return sparse_spectral_radius(mesh_operator(tup, p, mesh_size, sampling=sampling).matrix)
