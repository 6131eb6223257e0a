"""Tree types.

Two representations are used throughout the package:

* ``Tree`` / ``Leaf`` -- an ordered n-ary constituent tree as read from a
  treebank.  Preterminals are ``Leaf(word, pos)``; the POS layer is metadata
  and never counts as a constituent.
* ``BinTree`` -- a binary span tree.  Every span of the binary bracketing is
  exactly one node, so a tree over ``n`` words has ``2n - 1`` nodes.  Leaf
  spans carry the word and POS; their label is ``EMPTY`` for a bare
  preterminal, or a (possibly ``+``-joined) label for a unary chain sitting on
  top of the preterminal.

All traversals are iterative so degenerate (chain) trees with tens of
thousands of words work without touching the recursion limit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence, Union

EMPTY = "∅"
EMPTY_TOKEN = "@EMPTY@"
SEPARATOR = "+"
UNLABELED = "X"


@dataclass(frozen=True, eq=False)
class Leaf:
    word: str
    pos: str

    def __eq__(self, other):
        return isinstance(other, Leaf) and (self.word, self.pos) == (other.word, other.pos)

    def __hash__(self):
        return hash((self.word, self.pos))

    def __repr__(self):
        return f"Leaf({self.word!r}, {self.pos!r})"


@dataclass(frozen=True, eq=False)
class Tree:
    label: str
    children: tuple = ()

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return _signature(self) == _signature(other)

    def __hash__(self):
        return hash(_signature(self))

    def __repr__(self):
        return f"Tree({_signature(self)})"


Node = Union[Tree, Leaf]
ConstTree = Node


def fold(root, children: Callable, combine: Callable):
    """Bottom-up evaluation without recursion.

    ``combine(node, results)`` receives the results of the node's children in
    order.  Nodes are combined in post-order, so leaves are seen left to right.
    """
    stack = [(root, False)]
    results: list = []
    while stack:
        node, expanded = stack.pop()
        kids = children(node)
        if expanded or not kids:
            if kids:
                args = results[len(results) - len(kids):]
                del results[len(results) - len(kids):]
            else:
                args = []
            results.append(combine(node, args))
        else:
            stack.append((node, True))
            for child in reversed(kids):
                stack.append((child, False))
    return results[0]


def const_children(node: Node) -> tuple:
    return node.children if isinstance(node, Tree) else ()


def _signature(node: Node) -> str:
    def combine(n, kids):
        if isinstance(n, Leaf):
            return f"({n.pos} {n.word})"
        return f"({n.label} {' '.join(kids)})"

    return fold(node, const_children, combine)


def leaves(tree: Node) -> list[Leaf]:
    out = []
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out.append(node)
        else:
            stack.extend(reversed(node.children))
    return out


def iter_spans(tree: Node) -> Iterator[tuple[Node, int, int]]:
    """Yield ``(node, i, j)`` for every node, pre-order."""
    lengths: dict[int, int] = {}

    def measure(node, kids):
        size = 1 if isinstance(node, Leaf) else sum(kids)
        lengths[id(node)] = size
        return size

    fold(tree, const_children, measure)
    stack = [(tree, 0)]
    while stack:
        node, start = stack.pop()
        yield node, start, start + lengths[id(node)]
        if isinstance(node, Tree):
            offset = start
            pending = []
            for child in node.children:
                pending.append((child, offset))
                offset += lengths[id(child)]
            stack.extend(reversed(pending))


@dataclass(slots=True, eq=False)
class BinTree:
    start: int
    end: int
    label: str = EMPTY
    left: BinTree | None = None
    right: BinTree | None = None
    word: str | None = None
    pos: str | None = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def split(self) -> int | None:
        return None if self.left is None else self.left.end

    @property
    def n(self) -> int:
        return self.end - self.start

    def nodes(self) -> Iterator[BinTree]:
        """Pre-order traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            if node.left is not None:
                stack.append(node.right)
                stack.append(node.left)

    def internal_spans(self) -> set[tuple[int, int]]:
        return {(t.start, t.end) for t in self.nodes() if not t.is_leaf}

    def labeled_spans(self) -> list[tuple[int, int, str]]:
        return [(t.start, t.end, t.label) for t in self.nodes()]

    def leaf_nodes(self) -> list[BinTree]:
        return [t for t in self.nodes() if t.is_leaf]

    def same_structure(self, other: BinTree) -> bool:
        """Equality of the unlabeled bracketing."""
        return (self.start, self.end) == (other.start, other.end) and \
            self.internal_spans() == other.internal_spans()

    def copy(self) -> BinTree:
        def combine(node, kids):
            left, right = kids if kids else (None, None)
            return BinTree(node.start, node.end, node.label, left, right, node.word, node.pos)

        return fold(self, bin_children, combine)

    def __eq__(self, other):
        if not isinstance(other, BinTree):
            return NotImplemented
        return _bin_signature(self) == _bin_signature(other)

    def __hash__(self):
        return hash(_bin_signature(self))

    def __repr__(self):
        return f"BinTree({self.start}, {self.end}, {self.label!r}, split={self.split})"


def bin_children(node: BinTree) -> tuple:
    return () if node.left is None else (node.left, node.right)


def _bin_signature(tree: BinTree) -> tuple:
    return tuple((t.start, t.end, t.label, t.word, t.pos) for t in tree.nodes())


def placeholder_leaves(n: int) -> list[tuple[str, str]]:
    return [(f"w{k}", UNLABELED) for k in range(1, n + 1)]


def build_bintree(n: int, splits: Callable[[int, int], int],
                  leaves: Sequence[tuple[str, str]] | None = None,
                  label: str = UNLABELED) -> BinTree:
    """Top-down construction; ``splits(i, j)`` picks the split of span (i, j)."""
    if leaves is None:
        leaves = placeholder_leaves(n)
    elif len(leaves) != n:
        raise ValueError(f"expected {n} leaves, got {len(leaves)}")
    root = BinTree(0, n, label)
    stack = [root]
    while stack:
        node = stack.pop()
        i, j = node.start, node.end
        if j - i == 1:
            node.label = EMPTY
            node.word, node.pos = leaves[i]
            continue
        k = splits(i, j)
        node.left = BinTree(i, k, label)
        node.right = BinTree(k, j, label)
        stack.append(node.right)
        stack.append(node.left)
    return root


def random_bintree(n: int, rng: random.Random, leaves=None) -> BinTree:
    """Each span splits at a uniformly chosen point (random-BST shape)."""
    return build_bintree(n, lambda i, j: rng.randint(i + 1, j - 1), leaves)


def left_chain(n: int, leaves=None) -> BinTree:
    """``(((w1 w2) w3) ... wn)``: every split is as far right as possible."""
    return build_bintree(n, lambda i, j: j - 1, leaves)


def right_chain(n: int, leaves=None) -> BinTree:
    """``(w1 (w2 (... wn)))``: every split is as far left as possible."""
    return build_bintree(n, lambda i, j: i + 1, leaves)


@dataclass
class LabelSampler:
    """Random labels for synthetic corpora."""

    rng: random.Random
    labels: Sequence[str] = ("S", "NP", "VP", "PP", "ADJP", "SBAR", "ADVP")
    tags: Sequence[str] = ("NN", "NNS", "VBZ", "DT", "JJ", "IN", "PRP", ".")
    words: Sequence[str] = field(default=("the", "code", "she", "loves", "of", "big", "runs"))
    p_empty: float = 0.4
    p_unary: float = 0.15

    def chain(self) -> str:
        parts = [self.rng.choice(self.labels)]
        while self.rng.random() < self.p_unary and len(parts) < 3:
            parts.append(self.rng.choice(self.labels))
        return SEPARATOR.join(parts)

    def label_tree(self, tree: BinTree) -> BinTree:
        """Relabel a skeleton in place; the root never gets ``EMPTY``."""
        for node in tree.nodes():
            if node.is_leaf:
                node.word = self.rng.choice(self.words)
                node.pos = self.rng.choice(self.tags)
                node.label = EMPTY if self.rng.random() < 0.7 else self.chain()
            elif node is not tree and self.rng.random() < self.p_empty:
                node.label = EMPTY
            else:
                node.label = self.chain()
        return tree


def random_labeled_bintree(n: int, rng: random.Random) -> BinTree:
    return LabelSampler(rng).label_tree(random_bintree(n, rng))
