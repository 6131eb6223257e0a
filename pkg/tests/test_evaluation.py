from collections import Counter

import pytest
from conftest import const_trees
from hypothesis import given
from hypothesis import strategies as st

from spanlin.errors import InputError
from spanlin.evaluation import (
    EvalCounts,
    breakdowns,
    bucket_of,
    extract_eval_spans,
    f1,
    format_report,
    score,
    score_corpus,
)
from spanlin.treebank import parse_bracketed
from spanlin.trees import leaves


def one(text):
    [t] = parse_bracketed(text)
    return t


class TestExtract:
    def test_small(self):
        assert extract_eval_spans(one("(S (NP (PRP She)) (VP (VBZ smiles)))")) == \
            Counter({(0, 2, "S"): 1, (0, 1, "NP"): 1, (1, 2, "VP"): 1})

    def test_bare_preterminal(self):
        assert extract_eval_spans(one("(NN code)")) == Counter()

    def test_unary_chain_counts_each(self):
        assert extract_eval_spans(one("(S (VP (VBG writing)))")) == Counter({(0, 1, "S"): 1, (0, 1, "VP"): 1})

    def test_ignore(self):
        assert extract_eval_spans(one("(S (NP (PRP She)) (VP (VBZ smiles)))"), ["NP", "VP"]) == \
            Counter({(0, 2, "S"): 1})


class TestScore:
    gold = "(S (NP (DT the) (NN cat)) (VP (VBZ sat) (PP (IN on) (NP (DT the) (NN mat)))))"

    def test_identical(self):
        c = score(one(self.gold), one(self.gold))
        assert (c.matched, c.gold_total, c.pred_total) == (5, 5, 5)
        assert f1(c) == (1.0, 1.0, 1.0)

    def test_four_of_five(self):
        pred = "(S (NP (DT the) (NN cat)) (VP (VBZ sat) (NP (IN on) (NP (DT the) (NN mat)))))"
        lr, lp, f = f1(score(one(self.gold), one(pred)))
        assert lr == pytest.approx(0.8, abs=1e-12) and lp == pytest.approx(0.8, abs=1e-12)
        assert f == pytest.approx(0.8, abs=1e-12)

    def test_empty_prediction(self):
        c = score(one("(S (NP (PRP She)) (VP (VBZ smiles)))"), one("(X (PRP She) (VBZ smiles))"), ["X"])
        assert c.pred_total == 0 and f1(c) == (0.0, 0.0, 0.0)

    def test_duplicates_are_multiset(self):
        c = score(one("(S (S (NN a)))"), one("(S (NN a))"))
        assert (c.matched, c.gold_total, c.pred_total) == (1, 2, 1)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            score(one("(S (NN a) (NN b))"), one("(S (NN a))"))

    def test_corpus_count_mismatch(self):
        with pytest.raises(InputError):
            score_corpus([one("(S (NN a))")], [])


class TestBreakdowns:
    def test_buckets(self):
        assert [bucket_of(x) for x in (1, 3, 5, 6, 10, 11)] == [1, 1, 1, 6, 6, 11]
        assert bucket_of(3, 2) == 3

    def test_single_label_row(self):
        c = score_corpus([one("(NP (DT a) (NN b))")], [one("(NP (DT a) (NN b))")])
        r = breakdowns(c)
        assert [row.key for row in r.labels] == ["NP"]
        assert [row.key for row in r.lengths] == [1]

    def test_label_order(self):
        c = score(one("(S (NP (NN a)) (NP (NN b)) (VP (VBZ c)))"), one("(S (NP (NN a)) (NP (NN b)) (VP (VBZ c)))"))
        assert [row.key for row in breakdowns(c).labels] == ["NP", "S", "VP"]

    def test_empty_corpus(self):
        c = score_corpus([], [])
        text = format_report(breakdowns(c))
        assert "ALL 0 0 0" in text
        assert f1(c) == (0.0, 0.0, 0.0)

    def test_report_lines(self):
        c = score(one(TestScore.gold), one(TestScore.gold))
        lines = format_report(breakdowns(c)).splitlines()
        assert "ALL 5 5 5" in lines
        assert "LABEL NP 2 2 2" in lines
        # span lengths 6, 2, 4, 3, 2
        assert "LEN 1 4 4 4" in lines and "LEN 6 1 1 1" in lines


@given(const_trees, const_trees)
def test_symmetry(a, b):
    try:
        ab, ba = score(a, b), score(b, a)
    except InputError:
        return
    assert ab.matched == ba.matched
    assert (ab.gold_total, ab.pred_total) == (ba.pred_total, ba.gold_total)
    lr, lp, f = f1(ab)
    lr2, lp2, f2 = f1(ba)
    assert (lr, lp) == (lp2, lr2) and f == pytest.approx(f2)


@given(st.lists(st.tuples(const_trees, const_trees), max_size=6))
def test_sums_consistent(pairs):
    pairs = [(g, g if k % 2 else p) for k, (g, p) in enumerate(pairs)]
    pairs = [(g, p) for g, p in pairs if len(list(leaves(g))) == len(list(leaves(p)))]
    c = score_corpus([g for g, _ in pairs], [p for _, p in pairs])
    for table in (c.by_length, c.by_label):
        assert sum(v[0] for v in table.values()) == c.matched
        assert sum(v[1] for v in table.values()) == c.gold_total
        assert sum(v[2] for v in table.values()) == c.pred_total
    r = breakdowns(c, 3)
    assert sum(row.gold for row in r.lengths) == c.gold_total
    assert c.matched <= min(c.gold_total, c.pred_total)


@given(const_trees, const_trees)
def test_merge_commutes(a, b):
    x, y = score(a, a), score(b, b)
    assert x + y == y + x
    assert (x + EvalCounts()) == x


@given(const_trees, st.sets(st.sampled_from(["S", "NP", "VP"])))
def test_ignore_removes(t, ignore):
    c = score(t, t, ignore)
    assert all(lab not in ignore for lab in c.by_label)
    assert c.matched == c.gold_total == c.pred_total
