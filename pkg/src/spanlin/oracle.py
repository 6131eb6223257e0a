"""Exhaustive reference implementations for small sentences.

Nothing here calls the linearization or decoding code it is used to check:
trees are enumerated as tuples of ``(i, k, j)`` binary nodes, linearizations
are read off the longest-span definition directly, and tree probabilities are
products over explicitly collected left-child spans.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import OracleRangeError
from .trees import BinTree, build_bintree

MAX_N = 12
TIE_TOL = 1e-12

# A shape lists the binary nodes (i, k, j) of a tree in pre-order.
Shape = tuple


def catalan(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)


def _guard(n: int, max_n: int = MAX_N) -> None:
    if not 1 <= n <= max_n:
        raise OracleRangeError(f"n={n} outside the oracle range 1..{max_n}")


@lru_cache(maxsize=None)
def _shapes(i: int, j: int) -> tuple[Shape, ...]:
    if j - i == 1:
        return ((),)
    out = []
    for k in range(i + 1, j):
        for left in _shapes(i, k):
            for right in _shapes(k, j):
                out.append(((i, k, j),) + left + right)
    return tuple(out)


def shapes(n: int) -> tuple[Shape, ...]:
    _guard(n)
    return _shapes(0, n)


def shape_to_tree(shape: Shape, n: int, leaves=None) -> BinTree:
    splits = {(i, j): k for i, k, j in shape}
    return build_bintree(n, lambda i, j: splits[(i, j)], leaves)


def enumerate_trees(n: int) -> Iterator[BinTree]:
    """Every unlabeled binary tree over ``n`` leaves, once each (Catalan(n-1) of them)."""
    for shape in shapes(n):
        yield shape_to_tree(shape, n)


def definition_linearization(shape: Shape, n: int) -> tuple[int, ...]:
    """``d_m`` = left end of the longest span ending at ``m``."""
    longest = {m: m - 1 for m in range(1, n + 1)}
    for i, _, j in shape:
        longest[j] = min(longest[j], i)
    return tuple(longest[m] for m in range(1, n + 1))


@lru_cache(maxsize=None)
def _legal_set(n: int) -> frozenset:
    return frozenset(definition_linearization(s, n) for s in _shapes(0, n))


def legality_by_enumeration(d: Sequence[int]) -> bool:
    """True iff some binary tree over ``len(d)`` words has linearization ``d``."""
    n = len(d)
    _guard(n)
    return tuple(int(x) for x in d) in _legal_set(n)


def left_spans_of_shape(shape: Shape, n: int) -> list[tuple[int, int]]:
    return [(0, n)] + [(i, k) for i, k, _ in shape]


def best_tree_bruteforce(p, log_space: bool = False):
    """Highest-probability tree by scoring every tree.

    Returns ``(tree, probability)`` (log-probability with ``log_space``).
    Among trees tied within ``TIE_TOL`` the one with the lexicographically
    largest pre-order split sequence wins, i.e. the largest split at the
    root, then in the left subtree, and so on.
    """
    values = np.asarray(getattr(p, "values", p), dtype=np.float64)
    n = values.shape[0] - 1
    _guard(n)
    with np.errstate(divide="ignore"):
        logp = np.log(values)
    scored = []
    for shape in _shapes(0, n):
        total = math.fsum(logp[i, j] for i, j in left_spans_of_shape(shape, n))
        scored.append((total, shape))
    top = max(s for s, _ in scored)
    slack = TIE_TOL * (1.0 + abs(top)) if math.isfinite(top) else 0.0
    tied = [(s, shape) for s, shape in scored if s >= top - slack]
    score, winner = max(tied, key=lambda item: tuple(k for _, k, _ in item[1]))
    return shape_to_tree(winner, n), (score if log_space else math.exp(score))


def all_bounded_sequences(n: int) -> Iterator[tuple[int, ...]]:
    """Every sequence with ``0 <= d_i < i`` (``n!`` of them)."""
    return itertools.product(*(range(i) for i in range(1, n + 1)))
