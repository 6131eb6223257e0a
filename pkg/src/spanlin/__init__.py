"""Span linearization of constituent trees, reconstruction, and span-based decoding."""

from .decoder import (
    LabelTable,
    ProbMatrix,
    ScoreMatrix,
    SplitVectors,
    assign_labels,
    biaffine_score,
    cky_decode,
    load_scores,
    nll_loss,
    normalize,
    predict_linearization,
    save_scores,
)
from .evaluation import EvalCounts, breakdowns, extract_eval_spans, f1, score
from .linearization import (
    is_legal,
    left_child_spans,
    linearize,
    reconstruct_argmin,
    reconstruct_exact,
    reconstruct_leq,
)
from .oracle import best_tree_bruteforce, enumerate_trees, legality_by_enumeration
from .treebank import (
    Vocab,
    binarize,
    build_vocab,
    debinarize,
    parse_bracketed,
    preprocess,
    print_bracketed,
    unk_probability,
)
from .trees import EMPTY, BinTree, Leaf, Tree

__version__ = "0.1.0"
