import random
import string

import pytest
from hypothesis import strategies as st

from spanlin.trees import Leaf, Tree, random_bintree

EXAMPLE = "(S (NP (PRP She)) (VP (VBZ loves) (S (VP (VBG writing) (NP (NN code))))) (. .))"

LABELS = ["S", "NP", "VP", "PP", "ADJP", "SBAR"]
TAGS = ["NN", "VBZ", "DT", "JJ", "IN", "PRP", "."]

words = st.text(alphabet=string.ascii_letters + string.digits + "-.,'$*", min_size=1, max_size=6)
leaves = st.builds(Leaf, words, st.sampled_from(TAGS))


def trees_from(leaf_strategy, labels=LABELS, max_leaves=20):
    return st.recursive(
        leaf_strategy,
        lambda kids: st.builds(Tree, st.sampled_from(labels), st.lists(kids, min_size=1, max_size=4).map(tuple)),
        max_leaves=max_leaves,
    )


const_trees = trees_from(leaves)


@st.composite
def bin_trees(draw, max_n=30):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_bintree(n, random.Random(seed))


@st.composite
def bounded_sequences(draw, max_n=40):
    """Sequences satisfying only 0 <= d_i < i."""
    n = draw(st.integers(1, max_n))
    return tuple(draw(st.integers(0, i - 1)) for i in range(1, n + 1))


@pytest.fixture
def example_text():
    return EXAMPLE
