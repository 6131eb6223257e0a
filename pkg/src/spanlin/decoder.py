"""From span scores to trees.

Matrices are ``(n + 1) x (n + 1)`` numpy arrays addressed as ``values[i, j]``
for a span ``(i, j)`` with ``0 <= i < j <= n``; other cells are unused.
Column ``j`` of a probability matrix is the distribution over left
boundaries of the left-child span ending at ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import FileFormatError, InputError
from .linearization import linearize, reconstruct
from .trees import EMPTY, UNLABELED, BinTree, build_bintree

SUM_TOL = 1e-9
# Relative slack under which two CKY candidates count as tied.
TIE_TOL = 1e-12


def _span_mask(n: int) -> np.ndarray:
    return np.triu(np.ones((n + 1, n + 1), dtype=bool), k=1)


@dataclass
class ScoreMatrix:
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1] or self.values.shape[0] < 2:
            raise InputError(f"score matrix must be (n+1)x(n+1) with n >= 1, got {self.values.shape}")
        if not np.all(np.isfinite(self.values[_span_mask(self.n)])):
            raise InputError("score matrix has non-finite entries")

    @property
    def n(self) -> int:
        return self.values.shape[0] - 1

    def shifted(self, offsets: Sequence[float]) -> ScoreMatrix:
        """Add ``offsets[j]`` to every score in column ``j``."""
        return ScoreMatrix(self.values + np.asarray(offsets, dtype=np.float64)[None, :])


@dataclass
class ProbMatrix:
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 2:
            raise InputError(f"probability matrix must be (n+1)x(n+1) with n >= 1, got {v.shape}")
        mask = _span_mask(self.n)
        if np.any(v[mask] < 0) or not np.all(np.isfinite(v[mask])):
            raise InputError("probabilities must be finite and non-negative")
        sums = np.where(mask, v, 0.0).sum(axis=0)[1:]
        bad = np.flatnonzero(np.abs(sums - 1.0) > SUM_TOL)
        if bad.size:
            j = int(bad[0]) + 1
            raise InputError(f"column j={j} sums to {sums[j - 1]!r}, not 1")

    @property
    def n(self) -> int:
        return self.values.shape[0] - 1

    def log(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.values)


@dataclass
class SplitVectors:
    """Left/right split-point representations and biaffine parameters.

    ``left`` and ``right`` hold one row per split point ``0 .. n``.
    """

    left: np.ndarray
    right: np.ndarray
    weight: np.ndarray
    bias_left: np.ndarray
    bias_right: np.ndarray

    def __post_init__(self):
        self.left = np.atleast_2d(np.asarray(self.left, dtype=np.float64))
        self.right = np.atleast_2d(np.asarray(self.right, dtype=np.float64))
        self.weight = np.atleast_2d(np.asarray(self.weight, dtype=np.float64))
        self.bias_left = np.asarray(self.bias_left, dtype=np.float64).reshape(-1)
        self.bias_right = np.asarray(self.bias_right, dtype=np.float64).reshape(-1)
        dl, dr = self.left.shape[1], self.right.shape[1]
        if self.left.shape[0] != self.right.shape[0]:
            raise InputError("left and right vectors cover different numbers of split points")
        if self.left.shape[0] < 2:
            raise InputError("need at least two split points (n >= 1)")
        if self.weight.shape != (dl, dr):
            raise InputError(f"weight has shape {self.weight.shape}, expected {(dl, dr)}")
        if self.bias_left.shape != (dl,) or self.bias_right.shape != (dr,):
            raise InputError("bias dimensions do not match the vectors")


def biaffine_score(v: SplitVectors) -> ScoreMatrix:
    """``alpha[i, j] = l_i^T W r_j + b1^T l_i + b2^T r_j``."""
    alpha = v.left @ v.weight @ v.right.T
    alpha += (v.left @ v.bias_left)[:, None]
    alpha += (v.right @ v.bias_right)[None, :]
    n = v.left.shape[0] - 1
    return ScoreMatrix(np.where(_span_mask(n), alpha, 0.0))


def normalize(s: ScoreMatrix) -> ProbMatrix:
    """Softmax over left boundaries ``i < j`` separately for each right boundary ``j``."""
    mask = _span_mask(s.n)
    masked = np.where(mask, s.values, -np.inf)
    cols = masked[:, 1:]
    shifted = cols - cols.max(axis=0, keepdims=True)
    e = np.exp(shifted)
    p = np.zeros_like(s.values)
    p[:, 1:] = e / e.sum(axis=0, keepdims=True)
    return ProbMatrix(p)


def predict_linearization(p: ProbMatrix) -> tuple[int, ...]:
    """Greedy ``d_j = argmax_i P(i | j)``; ties go to the smallest ``i``."""
    return tuple(int(np.argmax(p.values[:j, j])) for j in range(1, p.n + 1))


def _cky_chart(logp: np.ndarray):
    n = logp.shape[0] - 1
    best = np.full((n + 1, n + 1), -np.inf)
    back = np.zeros((n + 1, n + 1), dtype=np.int64)
    idx = np.arange(n)
    best[idx, idx + 1] = 0.0
    for length in range(2, n + 1):
        starts = np.arange(n - length + 1)[:, None]
        ks = starts + np.arange(1, length)[None, :]
        cand = best[starts, ks] + logp[starts, ks] + best[ks, starts + length]
        top = cand.max(axis=1)
        slack = np.where(np.isfinite(top), TIE_TOL * (1.0 + np.abs(top)), 0.0)
        tied = cand >= (top - slack)[:, None]
        # rightmost tied candidate
        pick = length - 2 - np.argmax(tied[:, ::-1], axis=1)
        rows = starts[:, 0]
        best[rows, rows + length] = top
        back[rows, rows + length] = ks[np.arange(len(rows)), pick]
    return best, back


def cky_decode(p: ProbMatrix, leaves=None) -> BinTree:
    """Binary tree maximizing the product of its left-child span probabilities.

    Each binary node ``(i, j)`` split at ``k`` contributes ``P(i | k)``; the
    root contributes ``P(0 | n)``, which is the same for every tree.  Ties go
    to the largest ``k``.  Zero probabilities are ``-inf`` in log space.
    """
    _, back = _cky_chart(p.log())
    return build_bintree(p.n, lambda i, j: int(back[i, j]), leaves)


def cky_best_log_probability(p: ProbMatrix) -> float:
    logp = p.log()
    best, _ = _cky_chart(logp)
    return float(best[0, p.n] + logp[0, p.n])


def tree_log_probability(tree: BinTree, p: ProbMatrix) -> float:
    """``sum_i log P(d_i | i)`` over the tree's linearization."""
    d = linearize(tree)
    logp = p.log()
    return float(sum(logp[di, i] for i, di in enumerate(d, start=1)))


def decode(p: ProbMatrix, mode: str, leaves=None) -> BinTree:
    """``cky`` runs the chart decoder; other modes reconstruct from the greedy sequence."""
    if mode == "cky":
        return cky_decode(p, leaves)
    return reconstruct(predict_linearization(p), mode, leaves)


@dataclass
class LabelTable:
    """Per-span label distributions, keyed by ``(i, j)``."""

    n: int
    dists: dict = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), dist in self.dists.items():
            if not 0 <= i < j <= self.n:
                raise InputError(f"span ({i}, {j}) outside 0..{self.n}")
            if not dist:
                raise InputError(f"span ({i}, {j}) has an empty distribution")
            total = math.fsum(dist.values())
            if any(q < 0 for q in dist.values()) or abs(total - 1.0) > SUM_TOL:
                raise InputError(f"label distribution of span ({i}, {j}) sums to {total!r}")

    @classmethod
    def one_hot(cls, tree: BinTree) -> LabelTable:
        return cls(tree.n, {(t.start, t.end): {t.label: 1.0} for t in tree.nodes()})

    def argmax(self, i: int, j: int, allow_empty: bool = True) -> str:
        try:
            dist = self.dists[(i, j)]
        except KeyError:
            raise InputError(f"label table has no entry for span ({i}, {j})") from None
        items = [(q, lab) for lab, q in dist.items() if allow_empty or lab != EMPTY]
        if not items:
            raise InputError(f"span ({i}, {j}) has no non-empty label")
        top = max(q for q, _ in items)
        return min(lab for q, lab in items if q == top)


def assign_labels(tree: BinTree, lt: LabelTable) -> BinTree:
    """Copy of ``tree`` with every span labeled by its most probable label.

    Ties go to the lexicographically first label.  A branching root never
    receives the empty label.
    """
    out = tree.copy()
    for node in out.nodes():
        root_branch = node is out and not node.is_leaf
        node.label = lt.argmax(node.start, node.end, allow_empty=not root_branch)
    return out


def nll_loss(gold: BinTree, p: ProbMatrix, lt: LabelTable, include_empty: bool = True) -> float:
    """Negative log-likelihood of a gold binary tree, averaged over its length.

    Structure term: ``log P(d_i | i)`` for the gold linearization.  Label term:
    ``log P(label | i, j)`` for every span of the binary tree (spans labeled
    ``EMPTY`` are skipped unless ``include_empty``).  Returns ``math.inf`` when
    any required probability is zero.
    """
    n = gold.n
    if p.n != n or lt.n != n:
        raise InputError(f"gold has n={n}, tables have n={p.n} and n={lt.n}")
    terms = [p.values[di, i] for i, di in enumerate(linearize(gold), start=1)]
    for i, j, label in gold.labeled_spans():
        if label == EMPTY and not include_empty:
            continue
        try:
            dist = lt.dists[(i, j)]
        except KeyError:
            raise InputError(f"label table has no entry for span ({i}, {j})") from None
        terms.append(dist.get(label, 0.0))
    if any(q <= 0.0 for q in terms):
        return math.inf
    return 0.0 - math.fsum(math.log(q) for q in terms) / n


def one_hot_probs(tree: BinTree) -> ProbMatrix:
    n = tree.n
    p = np.zeros((n + 1, n + 1))
    for j, dj in enumerate(linearize(tree), start=1):
        p[dj, j] = 1.0
    return ProbMatrix(p)


def one_hot_scores(tree: BinTree, margin: float = 1000.0) -> ScoreMatrix:
    """Scores whose softmax underflows to exactly the one-hot gold columns."""
    n = tree.n
    s = np.where(_span_mask(n), -margin, 0.0)
    for j, dj in enumerate(linearize(tree), start=1):
        s[dj, j] = 0.0
    return ScoreMatrix(s)


# -- files -----------------------------------------------------------------

def _blocks(lines: Iterable[str]):
    """Split ``n=<int>`` headed blocks; yields ``(n, header_lineno, [(lineno, fields)])``."""
    current = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n="):
            if current is not None:
                yield current
            try:
                n = int(line[2:])
            except ValueError:
                raise FileFormatError(f"bad header {line!r}", lineno) from None
            if n < 1:
                raise FileFormatError("n must be >= 1", lineno)
            current = (n, lineno, [])
        elif current is None:
            raise FileFormatError("expected 'n=<int>' header", lineno)
        else:
            current[2].append((lineno, line.split()))
    if current is not None:
        yield current


def _read_lines(source) -> list[str]:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8").splitlines()
    return source.read().splitlines()


def load_scores(source) -> list[ScoreMatrix]:
    """Read score matrices: ``n=<int>`` then ``j i value`` for all ``0 <= i < j <= n``."""
    out = []
    for n, header, rows in _blocks(_read_lines(source)):
        values = np.zeros((n + 1, n + 1))
        seen = np.zeros((n + 1, n + 1), dtype=bool)
        for lineno, fields in rows:
            if len(fields) != 3:
                raise FileFormatError("expected 'j i value'", lineno)
            try:
                j, i, v = int(fields[0]), int(fields[1]), float(fields[2])
            except ValueError:
                raise FileFormatError(f"malformed cell {' '.join(fields)!r}", lineno) from None
            if not 0 <= i < j <= n:
                raise FileFormatError(f"cell (i={i}, j={j}) out of range for n={n}", lineno)
            if seen[i, j]:
                raise FileFormatError(f"duplicate cell (i={i}, j={j})", lineno)
            if not math.isfinite(v):
                raise FileFormatError(f"non-finite score {fields[2]!r}", lineno)
            seen[i, j] = True
            values[i, j] = v
        for j in range(1, n + 1):
            for i in range(j):
                if not seen[i, j]:
                    raise FileFormatError(f"block at line {header}: missing cell (i={i}, j={j})")
        out.append(ScoreMatrix(values))
    return out


def save_scores(dest, matrices: Iterable[ScoreMatrix]) -> None:
    def write(f: TextIO):
        for s in matrices:
            f.write(f"n={s.n}\n")
            for j in range(1, s.n + 1):
                for i in range(j):
                    f.write(f"{j} {i} {float(s.values[i, j])!r}\n")

    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8") as f:
            write(f)
    else:
        write(dest)


def load_labels(source) -> list[LabelTable]:
    """Read label tables: ``n=<int>`` then ``i j label prob`` lines."""
    out = []
    for n, _, rows in _blocks(_read_lines(source)):
        dists: dict = {}
        for lineno, fields in rows:
            if len(fields) != 4:
                raise FileFormatError("expected 'i j label prob'", lineno)
            try:
                i, j, q = int(fields[0]), int(fields[1]), float(fields[3])
            except ValueError:
                raise FileFormatError(f"malformed entry {' '.join(fields)!r}", lineno) from None
            label = EMPTY if fields[2] == "@EMPTY@" else fields[2]
            if not 0 <= i < j <= n:
                raise FileFormatError(f"span ({i}, {j}) out of range for n={n}", lineno)
            dist = dists.setdefault((i, j), {})
            if label in dist:
                raise FileFormatError(f"duplicate label {fields[2]!r} for span ({i}, {j})", lineno)
            dist[label] = q
        try:
            out.append(LabelTable(n, dists))
        except InputError as e:
            raise FileFormatError(str(e)) from None
    return out


def save_labels(dest, tables: Iterable[LabelTable]) -> None:
    def write(f: TextIO):
        for lt in tables:
            f.write(f"n={lt.n}\n")
            for (i, j) in sorted(lt.dists):
                for label, q in sorted(lt.dists[(i, j)].items()):
                    name = "@EMPTY@" if label == EMPTY else label
                    f.write(f"{i} {j} {name} {float(q)!r}\n")

    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8") as f:
            write(f)
    else:
        write(dest)


def unlabeled(tree: BinTree) -> BinTree:
    """Placeholder-labeled copy: ``X`` on branching nodes, bare leaves."""
    out = tree.copy()
    for node in out.nodes():
        node.label = EMPTY if node.is_leaf else UNLABELED
    return out
