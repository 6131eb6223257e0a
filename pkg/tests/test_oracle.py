import math

import numpy as np
import pytest

from spanlin import oracle
from spanlin.checks import cky_agreement, legality_agreement, random_prob_matrix
from spanlin.decoder import ProbMatrix, ScoreMatrix, cky_decode, normalize, one_hot_probs, tree_log_probability
from spanlin.errors import OracleRangeError
from spanlin.linearization import is_legal, linearize
from spanlin.trees import right_chain


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 2), (4, 5), (5, 14), (8, 429)])
def test_tree_counts(n, count):
    assert len(oracle.shapes(n)) == count == oracle.catalan(n - 1)


def test_shapes_distinct():
    trees = list(oracle.enumerate_trees(6))
    assert len({frozenset(t.internal_spans()) for t in trees}) == len(trees) == 42


def test_guard():
    with pytest.raises(OracleRangeError):
        oracle.shapes(oracle.MAX_N + 1)
    with pytest.raises(OracleRangeError):
        oracle.shapes(0)


@pytest.mark.parametrize("n", range(1, 9))
def test_linearization_injective(n):
    ds = {linearize(t) for t in oracle.enumerate_trees(n)}
    assert len(ds) == oracle.catalan(n - 1)


def test_legality_examples():
    assert oracle.legality_by_enumeration((0, 1, 2, 1, 0))
    assert not oracle.legality_by_enumeration((0, 0, 1))
    assert not oracle.legality_by_enumeration((0, 1))
    assert oracle.legality_by_enumeration((0,))


def test_brute_force_one_hot():
    gold = right_chain(5)
    tree, value = oracle.best_tree_bruteforce(one_hot_probs(gold))
    assert tree.same_structure(gold) and value == 1.0


def test_brute_force_uniform_matches_cky():
    p = normalize(ScoreMatrix(np.zeros((6, 6))))
    tree, value = oracle.best_tree_bruteforce(p)
    assert value == pytest.approx(1 / 120, rel=1e-12)
    assert tree == cky_decode(p)


def test_brute_force_log_space():
    p = random_prob_matrix(6, np.random.default_rng(9))
    _, value = oracle.best_tree_bruteforce(p)
    _, log_value = oracle.best_tree_bruteforce(p, log_space=True)
    assert math.log(value) == pytest.approx(log_value, abs=1e-12)
    assert tree_log_probability(cky_decode(p), p) == pytest.approx(log_value, abs=1e-12)


def test_brute_force_zero_matrix_entries():
    p = np.zeros((4, 4))
    p[0, 1:] = 1.0
    tree, value = oracle.best_tree_bruteforce(ProbMatrix(p))
    assert value == 1.0 and linearize(tree) == (0, 0, 0)


def test_all_bounded_sequences():
    seqs = list(oracle.all_bounded_sequences(4))
    assert len(seqs) == math.factorial(4)
    assert sum(bool(is_legal(d)) for d in seqs) == 5


def test_agreement_helpers_small():
    assert legality_agreement(5).passed
    assert cky_agreement(range(2, 6), trials=50, seed=3).passed
