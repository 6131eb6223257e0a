"""Invariant suite behind the ``check`` and ``oracle-test`` commands."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import oracle
from .decoder import ProbMatrix, cky_decode, tree_log_probability
from .linearization import is_legal, left_child_spans, linearize, reconstruct
from .treebank import binarize, debinarize, is_binarized, parse_bracketed, preprocess, print_bracketed
from .trees import Node, random_labeled_bintree


@dataclass
class Failure:
    index: int
    check: str
    detail: str

    def __str__(self):
        return f"tree {self.index}: {self.check} failed: {self.detail}"


def check_tree(tree: Node) -> list[tuple[str, str]]:
    """Run every per-tree invariant; returns ``(check, detail)`` for failures."""
    failures = []
    text = print_bracketed(tree)
    again = parse_bracketed(text)
    if len(again) != 1 or again[0] != tree:
        failures.append(("print/parse round trip", text))
    clean = preprocess(tree)
    if preprocess(clean) != clean:
        failures.append(("preprocess idempotence", text))
    bt = binarize(clean)
    if not is_binarized(bt):
        failures.append(("binarized shape", print_bracketed(bt)))
    if debinarize(bt) != clean:
        failures.append(("binarize/debinarize round trip", print_bracketed(clean)))
    d = linearize(bt)
    if not is_legal(d):
        failures.append(("linearization legal", " ".join(map(str, d))))
    spans = left_child_spans(bt)
    if spans != {(di, i) for i, di in enumerate(d, start=1)} or len(spans) != bt.n:
        failures.append(("left-child spans equal {(d_i, i)}", print_bracketed(bt)))
    for mode in ("exact", "leq", "argmin"):
        if not reconstruct(d, mode).same_structure(bt):
            failures.append((f"reconstruct ({mode}) round trip", " ".join(map(str, d))))
    return failures


def check_corpus(trees: Iterable[Node]) -> tuple[int, Failure | None]:
    """Check trees in order; stops at the first counterexample."""
    count = 0
    for count, tree in enumerate(trees, start=1):
        found = check_tree(tree)
        if found:
            check, detail = found[0]
            return count, Failure(count, check, detail)
    return count, None


def random_corpus(count: int, seed: int, max_n: int = 40) -> list[Node]:
    rng = random.Random(seed)
    return [debinarize(random_labeled_bintree(rng.randint(1, max_n), rng)) for _ in range(count)]


def random_prob_matrix(n: int, rng: np.random.Generator) -> ProbMatrix:
    p = np.zeros((n + 1, n + 1))
    for j in range(1, n + 1):
        p[:j, j] = rng.dirichlet(np.ones(j))
    return ProbMatrix(p)


@dataclass
class OracleResult:
    name: str
    passed: bool
    detail: str


def legality_agreement(max_n: int = 7) -> OracleResult:
    """Exhaustive legality check over all bounded sequences up to ``max_n``."""
    detail = []
    for n in range(1, max_n + 1):
        legal = 0
        for d in oracle.all_bounded_sequences(n):
            fast = is_legal(d).legal
            if fast != oracle.legality_by_enumeration(d):
                return OracleResult("legality", False, f"disagreement on {d}")
            legal += fast
        if legal != oracle.catalan(n - 1):
            return OracleResult("legality", False, f"n={n}: {legal} legal sequences, expected {oracle.catalan(n - 1)}")
        detail.append(f"n={n}:{legal}")
    return OracleResult("legality", True, "agrees with enumeration; legal counts are Catalan(n-1): " + " ".join(detail))


def cky_agreement(sizes=range(2, 9), trials: int = 1000, seed: int = 0, tol: float = 1e-9) -> OracleResult:
    worst = 0.0
    for n in sizes:
        rng = np.random.default_rng([seed, n])
        for t in range(trials):
            p = random_prob_matrix(n, rng)
            tree = cky_decode(p)
            ref, ref_logp = oracle.best_tree_bruteforce(p, log_space=True)
            gap = abs(tree_log_probability(tree, p) - ref_logp)
            worst = max(worst, gap)
            if gap > tol:
                return OracleResult("cky", False, f"n={n} trial {t}: log-probability gap {gap:.3e}")
            if not tree.same_structure(ref):
                return OracleResult("cky", False, f"n={n} trial {t}: different tree at equal probability")
    count = trials * len(sizes)
    return OracleResult("cky", True, f"{count} instances, identical trees, max |log-probability gap| = {worst:.2e}")
