import math
import random
from collections import Counter

import pytest
from conftest import EXAMPLE, const_trees, leaves, trees_from
from hypothesis import given
from hypothesis import strategies as st

from spanlin.errors import EmptyTreeError, ParseError, StructureError
from spanlin.treebank import (
    UNK,
    Vocab,
    binarize,
    build_vocab,
    debinarize,
    is_binarized,
    parse_bracketed,
    parse_with_lines,
    preprocess,
    print_bracketed,
    to_bintree,
    unk_probability,
    unkify,
)
from spanlin.trees import EMPTY, Leaf, Tree, iter_spans


def one(text):
    [t] = parse_bracketed(text)
    return t


class TestParse:
    def test_example(self):
        t = one(EXAMPLE)
        spans = list(iter_spans(t))
        assert spans[0][1:] == (0, 5)
        assert [leaf for leaf, i, j in spans if isinstance(leaf, Leaf)] == [
            Leaf("She", "PRP"), Leaf("loves", "VBZ"), Leaf("writing", "VBG"), Leaf("code", "NN"), Leaf(".", ".")]

    def test_smallest(self):
        t = one("(NP (NN code))")
        assert t == Tree("NP", (Leaf("code", "NN"),))
        assert next(iter_spans(t))[1:] == (0, 1)

    def test_unbalanced(self):
        with pytest.raises(ParseError, match="unbalanced") as e:
            parse_bracketed("(S (NP")
        assert e.value.line == 1

    def test_extra_close_reports_position(self):
        with pytest.raises(ParseError) as e:
            parse_bracketed("(NP (NN a))\n(NP (NN b)))")
        assert (e.value.line, e.value.column) == (2, 12)

    def test_empty_label(self):
        with pytest.raises(ParseError, match="empty label"):
            parse_bracketed("( (S (NN a)))")

    def test_no_children(self):
        with pytest.raises(ParseError, match="no children"):
            parse_bracketed("(S (NP) (NN a))")

    def test_many_trees_whitespace_insensitive(self):
        text = "(NP (NN a))\n\n  (S\n (NP (NN b))\n (VP (VBZ c)))"
        got = parse_with_lines(text)
        assert [line for _, line in got] == [1, 3]
        assert print_bracketed(got[1][0]) == "(S (NP (NN b)) (VP (VBZ c)))"

    def test_empty_text(self):
        assert parse_bracketed("  \n") == []

    def test_tokens_verbatim(self):
        t = one("(NP (-LRB- -LRB-) (NN x) (-RRB- -RRB-))")
        assert print_bracketed(t) == "(NP (-LRB- -LRB-) (NN x) (-RRB- -RRB-))"


class TestPrint:
    def test_round_trip_example(self):
        t = one(EXAMPLE)
        assert print_bracketed(t) == EXAMPLE
        assert one(print_bracketed(t)) == t

    def test_smallest_exact(self):
        assert print_bracketed(one("(NP (NN code))")) == "(NP (NN code))"

    def test_nested_unary(self):
        assert print_bracketed(one("(S (VP (VBG writing)))")) == "(S (VP (VBG writing)))"

    @given(const_trees)
    def test_round_trip_property(self, t):
        assert parse_bracketed(print_bracketed(t)) == [t]


class TestPreprocess:
    def test_root_wrapper(self):
        assert preprocess(one("(ROOT (S (NP (PRP She)) (VP (VBZ smiles))))")) == \
            one("(S (NP (PRP She)) (VP (VBZ smiles)))")

    def test_top_wrapper(self):
        assert preprocess(one("(TOP (NP (NN a)))")) == one("(NP (NN a))")

    def test_none_leaf_and_empty_parent(self):
        assert preprocess(one("(S (NP (-NONE- *T*)) (VP (VBZ smiles)))")) == one("(S (VP (VBZ smiles)))")

    def test_degenerate(self):
        with pytest.raises(EmptyTreeError):
            preprocess(one("(ROOT (-NONE- *))"))

    def test_root_over_many(self):
        with pytest.raises(StructureError):
            preprocess(one("(ROOT (NP (NN a)) (NP (NN b)))"))

    @given(trees_from(st.one_of(leaves, st.builds(Leaf, st.just("*T*"), st.just("-NONE-"))),
                      labels=["S", "NP", "ROOT", "VP"]))
    def test_idempotent(self, t):
        try:
            once = preprocess(t)
        except (EmptyTreeError, StructureError):
            return
        assert preprocess(once) == once
        for node, _, _ in iter_spans(once):
            assert getattr(node, "pos", None) != "-NONE-"
            assert getattr(node, "label", None) not in ("ROOT", "TOP")


class TestBinarize:
    def test_example(self):
        b = binarize(one(EXAMPLE))
        assert (b.label, b.left.start, b.left.end, b.right.start, b.right.end) == ("S", 0, 1, 1, 5)
        assert b.left.label == "NP" and b.left.is_leaf
        assert b.right.label == EMPTY
        assert print_bracketed(b) == \
            "(S (NP (PRP She)) (@EMPTY@ (VP (VBZ loves) (S+VP (VBG writing) (NP (NN code)))) (. .)))"

    def test_two_children_unchanged(self):
        b = binarize(one("(S (NP (NN a)) (VP (VBZ b)))"))
        assert print_bracketed(b) == "(S (NP (NN a)) (VP (VBZ b)))"

    def test_unary_collapse(self):
        b = binarize(one("(S (VP (VBG writing) (NP (NN code))))"))
        assert b.label == "S+VP" and not b.is_leaf
        assert (b.left.label, b.right.label) == (EMPTY, "NP")

    def test_unary_over_preterminal(self):
        b = binarize(one("(S (VP (VBG writing)))"))
        assert b.is_leaf and b.label == "S+VP" and (b.word, b.pos) == ("writing", "VBG")

    def test_right_factoring_of_four(self):
        b = binarize(one("(X (A a) (B b) (C c) (D d))"))
        assert print_bracketed(b) == "(X (A a) (@EMPTY@ (B b) (@EMPTY@ (C c) (D d))))"

    def test_reserved_label(self):
        with pytest.raises(StructureError):
            binarize(one("(S+VP (NN a) (NN b))"))

    @given(const_trees)
    def test_round_trip_and_shape(self, t):
        b = binarize(t)
        assert is_binarized(b)
        assert b.n == len([n for n, _, _ in iter_spans(t) if isinstance(n, Leaf)])
        assert len(list(b.nodes())) == 2 * b.n - 1
        assert debinarize(b) == t

    @given(const_trees)
    def test_bin_serialization_round_trip(self, t):
        b = binarize(t)
        assert to_bintree(one(print_bracketed(b))) == b


class TestDebinarize:
    def test_chain_expands(self):
        b = binarize(one("(S (VP (VBG writing) (NP (NN code))))"))
        assert print_bracketed(debinarize(b)) == "(S (VP (VBG writing) (NP (NN code))))"

    def test_plain_tree_unchanged(self):
        t = one("(S (NP (NN a)) (VP (VBZ b)))")
        assert debinarize(binarize(t)) == t

    def test_empty_root(self):
        b = binarize(one("(S (NN a) (NN b))"))
        b.label = EMPTY
        with pytest.raises(StructureError):
            debinarize(b)

    def test_deep_chain_no_recursion_limit(self):
        from spanlin.trees import right_chain

        b = right_chain(5000)
        t = debinarize(b)
        assert binarize(t).same_structure(b)


class TestVocab:
    def test_default_constant(self):
        v = Vocab(Counter({"w": 1}), 0.8375)
        assert unk_probability(v, "w") == pytest.approx(0.8375 / 1.8375, abs=1e-12)
        assert unk_probability(v, "w") == pytest.approx(0.45578, abs=5e-6)

    def test_unseen(self):
        assert unk_probability(Vocab(Counter({"a": 3})), "zzz") == 1.0

    @given(st.lists(st.integers(1, 10**6), min_size=2, max_size=20, unique=True),
           st.floats(0.01, 10.0))
    def test_range_and_monotone(self, counts, z):
        v = Vocab(Counter({f"w{c}": c for c in counts}), z)
        probs = [unk_probability(v, f"w{c}") for c in sorted(counts)]
        assert all(0 < q <= 1 for q in probs)
        assert all(a > b for a, b in zip(probs, probs[1:]))

    def test_limit(self):
        v = Vocab(Counter({"w": 10**12}))
        assert unk_probability(v, "w") < 1e-11

    def test_build_and_io(self, tmp_path):
        corpus = parse_bracketed(EXAMPLE + "\n(NP (NN code))")
        v = build_vocab(corpus)
        assert v.counts["code"] == 2 and v.z == 0.8375
        path = tmp_path / "vocab.txt"
        v.save(path)
        assert path.read_text().splitlines()[:2] == ["#z=0.8375", "code\t2"]
        assert Vocab.load(path) == v

    def test_bad_z(self):
        with pytest.raises(ValueError):
            Vocab(Counter(), 0.0)

    def test_unkify(self):
        v = Vocab(Counter({"a": 1, "b": 10**9}))
        assert unkify(["a", "q"], v) == ["a", UNK]
        rng = random.Random(1)
        draws = [unkify(["a", "b"], v, rng) for _ in range(4000)]
        rate = sum(d[0] == UNK for d in draws) / len(draws)
        assert math.isclose(rate, 0.8375 / 1.8375, abs_tol=0.03)
        assert all(d[1] == "b" for d in draws)
