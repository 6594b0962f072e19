"""Enumeration of the products ``A_w = A_{w_n} ... A_{w_1}`` over all words ``w``.

Words are tuples of 1-based letters.  Traversal is depth-first in
lexicographic order; each product is obtained from its prefix's product by
one left multiplication, so a full traversal to length ``n`` costs about
``N**n`` multiplications rather than ``n * N**n``.
"""

from __future__ import annotations

import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product as cartesian

from .linalg import Matrix, MatrixTuple, _mul_flat, working_precision


@dataclass(frozen=True)
class ProductVisit:
    word: tuple
    product: Matrix
    weight: object = 1
    multiplicity: int = 1


def necklace_period(word) -> int:
    """Length of the repeating block if ``word`` is the least of its rotations, else 0.

    A canonical word with period ``k`` stands for ``k`` distinct rotations.
    """
    p = 1
    for i in range(1, len(word)):
        c = word[i - p]
        if word[i] < c:
            return 0
        if word[i] > c:
            p = i + 1
    return p if len(word) % p == 0 else 0


def _walk(tup, word, num, den, weight, lo, hi, visitor, necklaces):
    mats = tup.matrices
    weights = tup.weights
    d = tup.dim
    n = len(word)
    if n >= lo:
        if necklaces:
            period = necklace_period(word)
            if period:
                visitor(ProductVisit(word, Matrix(d, num, den), weight, period))
        else:
            visitor(ProductVisit(word, Matrix(d, num, den), weight))
    if n == hi:
        return
    for i, m in enumerate(mats):
        w = weight if weights is None else weight * weights[i]
        if n == 0:
            child_num, child_den = m.num, m.den
        else:
            child_num, child_den = _mul_flat(m.num, num, d), m.den * den
        _walk(tup, word + (i + 1,), child_num, child_den, w, lo, hi, visitor, necklaces)


def _prefix_state(tup: MatrixTuple, prefix: tuple):
    d = tup.dim
    num = Matrix.identity(d).num
    den = 1
    weight = 1
    for letter in prefix:
        m = tup.matrices[letter - 1]
        num, den = _mul_flat(m.num, num, d), m.den * den
        if tup.weights is not None:
            weight = weight * tup.weights[letter - 1]
    return num, den, weight


def visit_products(tup: MatrixTuple, n: int, visitor, *, necklaces: bool = False) -> None:
    """Call ``visitor(ProductVisit)`` once for every word of length ``n``.

    With ``necklaces=True`` only the least rotation of each cyclic class is
    visited, carrying the class size in ``multiplicity``; sums of
    rotation-invariant quantities are unchanged.
    """
    if n < 1:
        raise ValueError("word length must be at least 1")
    with working_precision(tup.precision):
        _walk(tup, (), Matrix.identity(tup.dim).num, 1, 1, n, n, visitor, necklaces)


def visit_tree(tup: MatrixTuple, n_max: int, visitor, *, min_length: int = 1,
               necklaces: bool = False) -> None:
    """Visit every word with ``min_length <= |w| <= n_max``, prefixes before extensions."""
    if n_max < 1:
        raise ValueError("word length must be at least 1")
    with working_precision(tup.precision):
        _walk(tup, (), Matrix.identity(tup.dim).num, 1, 1, max(min_length, 1), n_max,
              visitor, necklaces)


def _run_partition(job):
    tup, prefix, lo, hi, make_accumulator, necklaces = job
    acc = make_accumulator()
    with working_precision(tup.precision):
        num, den, weight = _prefix_state(tup, prefix)
        _walk(tup, prefix, num, den, weight, lo, hi, acc, necklaces)
    return acc.result()


def partitioned_visit(tup: MatrixTuple, n: int, prefix_depth: int, make_accumulator, *,
                      tree: bool = False, necklaces: bool = False,
                      workers: int | None = None) -> list:
    """Split the traversal into the ``N**prefix_depth`` subtrees below each prefix.

    ``make_accumulator()`` must return a callable visitor with a ``result()``
    method.  One accumulator runs per subtree and the list of results comes
    back in lexicographic prefix order, whatever the worker scheduling.  With
    ``tree=True`` the subtrees cover all words of length ``prefix_depth..n``;
    otherwise only length ``n``.  ``workers > 1`` runs subtrees in separate
    processes (the factory must then be picklable).
    """
    if not 1 <= prefix_depth < n:
        raise ValueError("need 1 <= prefix_depth < n")
    lo = prefix_depth if tree else n
    prefixes = [tuple(w) for w in cartesian(range(1, tup.count + 1), repeat=prefix_depth)]
    jobs = [(tup, pre, lo, n, make_accumulator, necklaces) for pre in prefixes]
    if not workers or workers <= 1:
        return [_run_partition(job) for job in jobs]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        return list(pool.map(_run_partition, jobs))
