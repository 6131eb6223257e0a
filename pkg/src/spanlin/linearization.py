"""Span linearization of binary trees.

A binary tree over ``n`` words is encoded as ``d_1 .. d_n`` where ``(d_i, i)``
is the longest span of the tree ending at split point ``i``.  Those spans are
exactly the left-child spans of the tree (plus the root), so the sequence
determines the tree.

Sequences are plain tuples of ints, 1-based in the math and 0-based in
Python: ``d[i - 1]`` holds ``d_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import FileFormatError, IllegalLinearizationError, InputError
from .trees import BinTree, build_bintree

MODES = ("exact", "leq", "argmin")


def linearize(tree: BinTree) -> tuple[int, ...]:
    """Linearization of a binary tree rooted at span (0, n).

    >>> from spanlin.trees import right_chain
    >>> linearize(right_chain(4))
    (0, 1, 2, 0)
    """
    if tree.start != 0:
        raise ValueError("tree must be rooted at position 0")
    n = tree.end
    d = [0] * n
    for node in tree.nodes():
        if not node.is_leaf:
            d[node.split - 1] = node.start
    d[n - 1] = 0
    return tuple(d)


def left_child_spans(tree: BinTree, labels: bool = False) -> set:
    """The root span plus the left child of every binary node."""
    spans = {(tree.start, tree.end, tree.label) if labels else (tree.start, tree.end)}
    for node in tree.nodes():
        if not node.is_leaf:
            left = node.left
            spans.add((left.start, left.end, left.label) if labels else (left.start, left.end))
    return spans


@dataclass
class LegalityReport:
    """Outcome of :func:`is_legal`.

    ``out_of_range`` lists positions ``i`` with ``d_i`` outside ``[0, i)``;
    ``crossing`` lists pairs ``(i, j)``, ``i < j``, with ``d_i < d_j < i``;
    ``root_ok`` is false when ``d_n != 0``.
    """

    n: int
    out_of_range: list[int] = field(default_factory=list)
    crossing: list[tuple[int, int]] = field(default_factory=list)
    root_ok: bool = True

    @property
    def legal(self) -> bool:
        return self.root_ok and not self.out_of_range and not self.crossing

    @property
    def bounds_ok(self) -> bool:
        return not self.out_of_range

    def __bool__(self):
        return self.legal

    def describe(self) -> str:
        if self.legal:
            return "legal"
        parts = []
        if self.out_of_range:
            parts.append("d_i outside [0, i) at i=" + ",".join(map(str, self.out_of_range[:10])))
        if self.crossing:
            shown = ", ".join(f"({i},{j})" for i, j in self.crossing[:10])
            more = f" (+{len(self.crossing) - 10} more)" if len(self.crossing) > 10 else ""
            parts.append(f"crossing pairs {shown}{more}")
        if not self.root_ok:
            parts.append("d_n is not 0")
        return "; ".join(parts)


def _as_array(d: Sequence[int]) -> np.ndarray:
    if len(d) == 0:
        raise InputError("empty linearization")
    arr = np.asarray(d)
    if arr.ndim != 1 or not np.issubdtype(arr.dtype, np.integer):
        raise InputError("linearization must be a sequence of integers")
    return arr.astype(np.int64)


def is_legal(d: Sequence[int]) -> LegalityReport:
    """Check a sequence against the conditions for being a tree linearization.

    1. ``0 <= d_i < i`` for every ``i``;
    2. no later ``d_j`` falls strictly inside ``(d_i, i)``;
    3. ``d_n = 0`` (the root spans the whole sentence).
    """
    arr = _as_array(d)
    n = len(arr)
    idx = np.arange(1, n + 1)
    report = LegalityReport(n)
    report.out_of_range = [int(i) for i in idx[(arr < 0) | (arr >= idx)]]
    report.root_ok = bool(arr[-1] == 0)
    for i in range(1, n):
        lo = arr[i - 1]
        if i - lo < 2:
            continue
        later = arr[i:]
        hits = np.flatnonzero((later > lo) & (later < i))
        report.crossing.extend((i, int(i + 1 + h)) for h in hits)
    return report


@dataclass
class SearchStats:
    """Number of candidate split points inspected during reconstruction."""

    inspected: int = 0


def _check_bounds(d: Sequence[int]) -> list[int]:
    seq = [int(x) for x in _as_array(d)]
    bad = [i for i, x in enumerate(seq, start=1) if not 0 <= x < i]
    if bad:
        raise IllegalLinearizationError(f"d_i outside [0, i) at i={bad[0]} (d_i={seq[bad[0] - 1]})")
    return seq


def reconstruct(d: Sequence[int], mode: str = "exact", leaves=None,
                stats: SearchStats | None = None) -> BinTree:
    """Rebuild an unlabeled binary tree top-down.

    Span ``(i, j)`` is split at a ``k`` chosen from ``i < k < j`` by scanning
    right to left:

    * ``exact``  -- the largest ``k`` with ``d_k == i``; illegal input raises.
    * ``leq``    -- the largest ``k`` with ``d_k <= i``.
    * ``argmin`` -- the ``k`` with the smallest ``d_k``, largest on ties.

    The heuristic modes accept any sequence with ``0 <= d_i < i``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    seq = _check_bounds(d)
    n = len(seq)
    counter = stats if stats is not None else SearchStats()

    if mode == "exact":
        def split(i, j):
            for k in range(j - 1, i, -1):
                counter.inspected += 1
                if seq[k - 1] == i:
                    return k
            raise IllegalLinearizationError(f"no split point k with d_k = {i} inside span ({i}, {j})")
    elif mode == "leq":
        def split(i, j):
            for k in range(j - 1, i, -1):
                counter.inspected += 1
                if seq[k - 1] <= i:
                    return k
            raise AssertionError("unreachable when d_{i+1} <= i")
    else:
        def split(i, j):
            best_k, best = j - 1, seq[j - 2]
            for k in range(j - 2, i, -1):
                if seq[k - 1] < best:
                    best_k, best = k, seq[k - 1]
            counter.inspected += j - i - 1
            return best_k

    tree = build_bintree(n, split, leaves)
    if mode == "exact" and linearize(tree) != tuple(seq):
        raise IllegalLinearizationError(f"not a tree linearization: {is_legal(seq).describe()}")
    return tree


def reconstruct_exact(d: Sequence[int], leaves=None, stats=None) -> BinTree:
    """Rebuild the unique tree with linearization ``d``; illegal input raises.

    >>> sorted(reconstruct_exact((0, 1, 2, 1, 0)).internal_spans())
    [(0, 5), (1, 4), (1, 5), (2, 4)]
    """
    return reconstruct(d, "exact", leaves, stats)


def reconstruct_leq(d: Sequence[int], leaves=None, stats=None) -> BinTree:
    return reconstruct(d, "leq", leaves, stats)


def reconstruct_argmin(d: Sequence[int], leaves=None, stats=None) -> BinTree:
    return reconstruct(d, "argmin", leaves, stats)


def format_linearization(d: Sequence[int]) -> str:
    return " ".join(str(int(x)) for x in d)


def parse_linearization(line: str, lineno: int | None = None) -> tuple[int, ...]:
    fields = line.split()
    if not fields:
        raise FileFormatError("empty linearization", lineno)
    try:
        return tuple(int(x) for x in fields)
    except ValueError:
        raise FileFormatError(f"non-integer entry in {line.strip()!r}", lineno) from None
