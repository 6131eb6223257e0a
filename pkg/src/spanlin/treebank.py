"""Treebank I/O and normalization.

Bracketed reading/writing, cleanup of empty elements and wrapper nodes,
right binarization with unary-chain collapsing (and its inverse), and the
word-count vocabulary used for unknown-word replacement.
"""

from __future__ import annotations

import bisect
import random
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyTreeError, FileFormatError, ParseError, StructureError
from .trees import (
    EMPTY,
    EMPTY_TOKEN,
    SEPARATOR,
    BinTree,
    Leaf,
    Node,
    Tree,
    bin_children,
    const_children,
    fold,
    leaves,
)

NONE_TAG = "-NONE-"
WRAPPER_LABELS = frozenset({"ROOT", "TOP"})
UNK = "<UNK>"
DEFAULT_Z = 0.8375

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _locate(text: str):
    starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(offset):
        line = bisect.bisect_right(starts, offset)
        return line, offset - starts[line - 1] + 1

    return where


def parse_with_lines(text: str) -> list[tuple[Node, int]]:
    """Parse every tree in ``text``; returns ``(tree, first_line)`` pairs."""
    where = _locate(text)
    out = []
    # frame: [label, children, words, offset]
    stack: list[list] = []
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if tok == "(":
            stack.append([None, [], [], m.start()])
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced parentheses: unexpected ')'", *where(m.start()))
            label, children, words, offset = stack.pop()
            if label is None:
                raise ParseError("empty label", *where(offset))
            if words:
                if children or len(words) > 1:
                    raise ParseError(f"node {label!r} mixes words and subtrees", *where(offset))
                node = Leaf(words[0], label)
            elif not children:
                raise ParseError(f"node {label!r} has no children", *where(offset))
            else:
                node = Tree(label, tuple(children))
            if stack:
                stack[-1][1].append(node)
            else:
                out.append((node, where(offset)[0]))
        else:
            if not stack:
                raise ParseError(f"token {tok!r} outside any bracket", *where(m.start()))
            frame = stack[-1]
            if frame[0] is None and not frame[1]:
                frame[0] = tok
            else:
                frame[2].append(tok)
    if stack:
        raise ParseError("unbalanced parentheses: unclosed '('", *where(stack[-1][3]))
    return out


def parse_bracketed(text: str) -> list[Node]:
    """Read zero or more bracketed trees, in document order.

    >>> [t] = parse_bracketed("(NP (NN code))")
    >>> print_bracketed(t)
    '(NP (NN code))'
    """
    return [tree for tree, _ in parse_with_lines(text)]


def print_bracketed(tree: Node | BinTree) -> str:
    """Single-line bracketed form.

    Binary trees print with ``@EMPTY@`` in place of the empty label and with
    unary-chain labels left joined (``S+VP``).
    """
    if isinstance(tree, BinTree):
        return _print_bin(tree)

    def combine(node, kids):
        if isinstance(node, Leaf):
            return f"({node.pos} {node.word})"
        return f"({node.label} {' '.join(kids)})"

    return fold(tree, const_children, combine)


def _print_bin(tree: BinTree) -> str:
    def combine(node, kids):
        label = EMPTY_TOKEN if node.label == EMPTY else node.label
        if node.is_leaf:
            pre = f"({node.pos} {node.word})"
            return pre if node.label == EMPTY else f"({label} {pre})"
        return f"({label} {kids[0]} {kids[1]})"

    return fold(tree, bin_children, combine)


def to_bintree(tree: Node) -> BinTree:
    """Read back a binary tree printed by :func:`print_bracketed`."""
    counter = iter(range(10**12))

    def combine(node, kids):
        if isinstance(node, Leaf):
            k = next(counter)
            return BinTree(k, k + 1, EMPTY, word=node.word, pos=node.pos)
        label = EMPTY if node.label == EMPTY_TOKEN else node.label
        if len(kids) == 1 and kids[0].is_leaf and kids[0].label == EMPTY:
            kids[0].label = label
            return kids[0]
        if len(kids) != 2:
            raise StructureError(f"node {node.label!r} has {len(kids)} children; expected 2")
        return BinTree(kids[0].start, kids[1].end, label, kids[0], kids[1])

    return fold(tree, const_children, combine)


def read_treebank(path) -> list[Node]:
    return parse_bracketed(Path(path).read_text(encoding="utf-8"))


def write_treebank(path, trees: Iterable[Node | BinTree]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for t in trees:
            f.write(print_bracketed(t) + "\n")


def preprocess(tree: Node) -> Node:
    """Drop ``-NONE-`` leaves (and nodes they leave empty) and ``ROOT``/``TOP`` wrappers."""

    def combine(node, kids):
        if isinstance(node, Leaf):
            return [] if node.pos == NONE_TAG else [node]
        flat = [c for group in kids for c in group]
        if not flat:
            return []
        if node.label in WRAPPER_LABELS:
            return flat
        return [Tree(node.label, tuple(flat))]

    result = fold(tree, const_children, combine)
    if not result:
        raise EmptyTreeError("tree is empty after preprocessing")
    if len(result) > 1:
        raise StructureError(f"cannot remove wrapper over {len(result)} constituents")
    return result[0]


def _check_label(label: str) -> None:
    if SEPARATOR in label or label in (EMPTY, EMPTY_TOKEN):
        raise StructureError(f"label {label!r} contains a reserved marker")


def binarize(tree: Node) -> BinTree:
    """Right binarization with ``EMPTY`` intermediates; unary chains collapse to ``A+B``.

    A node with children ``c1 .. cm`` becomes ``(c1 (EMPTY c2 (EMPTY ... cm)))``.
    """
    positions = iter(range(10**12))

    def combine(node, kids):
        if isinstance(node, Leaf):
            k = next(positions)
            return BinTree(k, k + 1, EMPTY, word=node.word, pos=node.pos)
        _check_label(node.label)
        if len(kids) == 1:
            child = kids[0]
            child.label = node.label if child.label == EMPTY else node.label + SEPARATOR + child.label
            return child
        acc = kids[-1]
        for c in reversed(kids[1:-1]):
            acc = BinTree(c.start, acc.end, EMPTY, c, acc)
        return BinTree(kids[0].start, acc.end, node.label, kids[0], acc)

    return fold(tree, const_children, combine)


def debinarize(tree: BinTree) -> Node:
    """Inverse of :func:`binarize`: splice out ``EMPTY`` nodes, expand joined labels."""
    if not tree.is_leaf and tree.label == EMPTY:
        raise StructureError("empty label at the root")

    def wrap(label, base):
        for part in reversed(label.split(SEPARATOR)):
            base = Tree(part, (base,))
        return base

    def combine(node, kids):
        if node.is_leaf:
            leaf = Leaf(node.word, node.pos)
            return [leaf] if node.label == EMPTY else [wrap(node.label, leaf)]
        children = kids[0] + kids[1]
        if node.label == EMPTY:
            return children
        *outer, inner = node.label.split(SEPARATOR)
        base = Tree(inner, tuple(children))
        return [wrap(SEPARATOR.join(outer), base)] if outer else [base]

    return fold(tree, bin_children, combine)[0]


def is_binarized(tree: BinTree) -> bool:
    """Structural predicate: a proper binary span tree with no ``EMPTY`` root."""
    if not tree.is_leaf and tree.label == EMPTY:
        return False
    for node in tree.nodes():
        if node.is_leaf:
            if node.end - node.start != 1 or node.word is None:
                return False
        elif not (node.left.start == node.start and node.left.end == node.right.start
                  and node.right.end == node.end):
            return False
    return True


@dataclass
class Vocab:
    counts: Counter = field(default_factory=Counter)
    z: float = DEFAULT_Z

    def __post_init__(self):
        if self.z <= 0:
            raise ValueError("z must be positive")
        if any(c < 1 for c in self.counts.values()):
            raise ValueError("counts must be >= 1")

    def __contains__(self, word):
        return word in self.counts

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"#z={self.z!r}\n")
            for word, count in sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0])):
                f.write(f"{word}\t{count}\n")

    @classmethod
    def load(cls, path) -> Vocab:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or not lines[0].startswith("#z="):
            raise FileFormatError("missing '#z=<value>' header", 1)
        try:
            z = float(lines[0][3:])
        except ValueError:
            raise FileFormatError(f"bad z value {lines[0][3:]!r}", 1) from None
        counts = Counter()
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[1].isdigit():
                raise FileFormatError("expected 'token<TAB>count'", lineno)
            counts[parts[0]] = int(parts[1])
        return cls(counts, z)


def build_vocab(corpus: Sequence[Node], z: float = DEFAULT_Z) -> Vocab:
    if not corpus:
        raise ValueError("corpus is empty")
    counts = Counter()
    for tree in corpus:
        counts.update(leaf.word for leaf in leaves(tree))
    return Vocab(counts, z)


def unk_probability(vocab: Vocab, word: str) -> float:
    """``z / (z + c(w))``; 1 for words never seen."""
    count = vocab.counts.get(word, 0)
    if count == 0:
        return 1.0
    return vocab.z / (vocab.z + count)


def unkify(words: Sequence[str], vocab: Vocab, rng: random.Random | None = None) -> list[str]:
    """Replace words by ``<UNK>``.

    With ``rng`` (training time) each word is dropped with its unknown-word
    probability; without it (test time) only unseen words are replaced.
    """
    if rng is None:
        return [w if w in vocab else UNK for w in words]
    return [UNK if rng.random() < unk_probability(vocab, w) else w for w in words]
