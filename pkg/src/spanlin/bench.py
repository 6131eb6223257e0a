"""Split-search work of tree reconstruction as a function of sentence length.

Work is the number of candidate split points the reconstruction inspects,
which is deterministic for a given seed.  Wall-clock time is recorded too
but only reported on request.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .decoder import ProbMatrix, cky_decode
from .linearization import SearchStats, linearize, reconstruct
from .trees import left_chain, random_bintree, right_chain

SHAPES = ("random", "left-chain", "right-chain")
DEFAULT_SIZES = (100, 200, 400, 800, 1600, 3200)


@dataclass
class BenchRow:
    shape: str
    mode: str
    n: int
    trees: int
    mean_work: float
    seconds: float


def _trees(shape: str, n: int, count: int, rng: random.Random):
    if shape == "random":
        return [random_bintree(n, rng) for _ in range(count)]
    if shape == "left-chain":
        return [left_chain(n)]
    if shape == "right-chain":
        return [right_chain(n)]
    raise ValueError(f"unknown shape {shape!r}")


def run(sizes: Sequence[int] = DEFAULT_SIZES, shapes: Sequence[str] = SHAPES,
        modes: Sequence[str] = ("exact", "leq", "argmin"), trees: int = 30,
        seed: int = 0) -> list[BenchRow]:
    rows = []
    for shape in shapes:
        for n in sizes:
            # one rng per (shape, n) so adding sizes never perturbs the others
            rng = random.Random(f"{seed}:{shape}:{n}")
            sample = [linearize(t) for t in _trees(shape, n, trees, rng)]
            for mode in modes:
                stats = SearchStats()
                t0 = time.perf_counter()
                for d in sample:
                    reconstruct(d, mode, stats=stats)
                elapsed = time.perf_counter() - t0
                rows.append(BenchRow(shape, mode, n, len(sample), stats.inspected / len(sample), elapsed))
    return rows


def doubling_ratios(rows: Sequence[BenchRow], shape: str, mode: str) -> list[tuple[int, float]]:
    """``work(n) / work(n_prev)`` for consecutive sizes that differ by a factor of two."""
    series = sorted((r.n, r.mean_work) for r in rows if r.shape == shape and r.mode == mode)
    out = []
    for (n0, w0), (n1, w1) in zip(series, series[1:]):
        if n1 == 2 * n0 and w0 > 0:
            out.append((n1, w1 / w0))
    return out


def growth_exponent(rows: Sequence[BenchRow], shape: str, mode: str) -> float:
    """Slope of log(work) against log(n) by least squares."""
    pts = [(r.n, r.mean_work) for r in rows if r.shape == shape and r.mode == mode and r.mean_work > 0]
    if len(pts) < 2:
        return float("nan")
    x, y = np.log([p[0] for p in pts]), np.log([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def format_rows(rows: Sequence[BenchRow], timings: bool = False) -> str:
    header = ["shape", "mode", "n", "trees", "mean_work", "ratio"]
    if timings:
        header.append("seconds")
    lines = ["\t".join(header)]
    ratio_of = {}
    for shape in {r.shape for r in rows}:
        for mode in {r.mode for r in rows}:
            for n, ratio in doubling_ratios(rows, shape, mode):
                ratio_of[(shape, mode, n)] = ratio
    for r in rows:
        ratio = ratio_of.get((r.shape, r.mode, r.n))
        cells = [r.shape, r.mode, str(r.n), str(r.trees), f"{r.mean_work:.1f}",
                 "-" if ratio is None else f"{ratio:.3f}"]
        if timings:
            cells.append(f"{r.seconds:.4f}")
        lines.append("\t".join(cells))
    lines.append("")
    seen = []
    for r in rows:
        if (r.shape, r.mode) not in seen:
            seen.append((r.shape, r.mode))
    for shape, mode in seen:
        lines.append(f"EXPONENT\t{shape}\t{mode}\t{growth_exponent(rows, shape, mode):.3f}")
    return "\n".join(lines) + "\n"


def cky_timings(sizes: Sequence[int], seed: int = 0) -> list[tuple[int, float]]:
    """Wall-clock seconds of one chart decode per size, on random probabilities."""
    rng = np.random.default_rng(seed)
    out = []
    for n in sizes:
        p = np.zeros((n + 1, n + 1))
        for j in range(1, n + 1):
            p[:j, j] = rng.dirichlet(np.ones(j))
        probs = ProbMatrix(p)
        t0 = time.perf_counter()
        cky_decode(probs)
        out.append((n, time.perf_counter() - t0))
    return out
