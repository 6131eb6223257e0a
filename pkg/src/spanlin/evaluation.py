"""Labeled-bracket (PARSEVAL) scoring with breakdowns by span length and label."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError
from .trees import Leaf, Node, iter_spans


def extract_eval_spans(tree: Node, ignore: Iterable[str] = ()) -> Counter:
    """Multiset of ``(i, j, label)`` over constituents above the POS layer.

    Each member of a unary chain contributes its own span.
    """
    ignore = frozenset(ignore)
    return Counter(
        (i, j, node.label)
        for node, i, j in iter_spans(tree)
        if not isinstance(node, Leaf) and node.label not in ignore
    )


def _add(table: dict, key, matched: int, gold: int, pred: int) -> None:
    m, g, p = table.get(key, (0, 0, 0))
    table[key] = (m + matched, g + gold, p + pred)


@dataclass
class EvalCounts:
    """Bracket counts; ``by_length`` is keyed by exact span length."""

    matched: int = 0
    gold_total: int = 0
    pred_total: int = 0
    by_length: dict = field(default_factory=dict)
    by_label: dict = field(default_factory=dict)
    sentences: int = 0

    def __add__(self, other: EvalCounts) -> EvalCounts:
        out = EvalCounts(self.matched + other.matched, self.gold_total + other.gold_total,
                         self.pred_total + other.pred_total, dict(self.by_length),
                         dict(self.by_label), self.sentences + other.sentences)
        for key, (m, g, p) in other.by_length.items():
            _add(out.by_length, key, m, g, p)
        for key, (m, g, p) in other.by_label.items():
            _add(out.by_label, key, m, g, p)
        return out


def _length(tree: Node) -> int:
    return next(iter_spans(tree))[2]


def score(gold: Node, pred: Node, ignore: Iterable[str] = ()) -> EvalCounts:
    """Compare two trees over the same sentence."""
    n_gold, n_pred = _length(gold), _length(pred)
    if n_gold != n_pred:
        raise InputError(f"length mismatch: gold has {n_gold} words, prediction has {n_pred}")
    g = extract_eval_spans(gold, ignore)
    p = extract_eval_spans(pred, ignore)
    common = g & p
    counts = EvalCounts(sum(common.values()), sum(g.values()), sum(p.values()), sentences=1)
    for bag, slot in ((common, 0), (g, 1), (p, 2)):
        for (i, j, label), c in bag.items():
            delta = [0, 0, 0]
            delta[slot] = c
            _add(counts.by_length, j - i, *delta)
            _add(counts.by_label, label, *delta)
    return counts


def score_corpus(golds: Sequence[Node], preds: Sequence[Node], ignore: Iterable[str] = ()) -> EvalCounts:
    if len(golds) != len(preds):
        raise InputError(f"{len(golds)} gold trees but {len(preds)} predicted trees")
    total = EvalCounts()
    for k, (g, p) in enumerate(zip(golds, preds), start=1):
        try:
            total = total + score(g, p, ignore)
        except InputError as e:
            raise InputError(f"sentence {k}: {e}") from None
    return total


def prf(matched: int, gold: int, pred: int) -> tuple[float, float, float]:
    recall = matched / gold if gold else 0.0
    precision = matched / pred if pred else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return recall, precision, f


def f1(c: EvalCounts) -> tuple[float, float, float]:
    """``(LR, LP, F1)``; empty denominators give 0."""
    return prf(c.matched, c.gold_total, c.pred_total)


@dataclass
class Row:
    key: object
    matched: int
    gold: int
    pred: int

    @property
    def scores(self):
        return prf(self.matched, self.gold, self.pred)


@dataclass
class Report:
    overall: Row
    lengths: list[Row]
    labels: list[Row]
    bucket_width: int


def bucket_of(length: int, width: int = 5) -> int:
    """Lower edge ``l`` of the bucket ``[l, l + width - 1]`` holding ``length``."""
    return 1 + width * ((length - 1) // width)


def breakdowns(c: EvalCounts, bucket_width: int = 5) -> Report:
    if bucket_width < 1:
        raise ValueError("bucket width must be >= 1")
    buckets: dict = {}
    for length, (m, g, p) in c.by_length.items():
        _add(buckets, bucket_of(length, bucket_width), m, g, p)
    lengths = [Row(b, *buckets[b]) for b in sorted(buckets)]
    labels = [Row(lab, *c.by_label[lab])
              for lab in sorted(c.by_label, key=lambda lab: (-c.by_label[lab][1], lab))]
    return Report(Row("all", c.matched, c.gold_total, c.pred_total), lengths, labels, bucket_width)


def format_report(report: Report) -> str:
    """Fixed-width tables followed by machine-readable ``LEN``/``LABEL`` lines."""
    out = []
    lr, lp, f = report.overall.scores
    out.append(f"{'':<12}{'LR':>8}{'LP':>8}{'F1':>8}{'match':>8}{'gold':>8}{'pred':>8}")
    out.append(f"{'all':<12}{lr * 100:8.2f}{lp * 100:8.2f}{f * 100:8.2f}"
               f"{report.overall.matched:8d}{report.overall.gold:8d}{report.overall.pred:8d}")
    if report.lengths:
        out.append("")
        out.append("by span length")
        for row in report.lengths:
            lr, lp, f = row.scores
            name = f"{row.key}-{row.key + report.bucket_width - 1}"
            out.append(f"{name:<12}{lr * 100:8.2f}{lp * 100:8.2f}{f * 100:8.2f}"
                       f"{row.matched:8d}{row.gold:8d}{row.pred:8d}")
    if report.labels:
        out.append("")
        out.append("by label")
        for row in report.labels:
            lr, lp, f = row.scores
            out.append(f"{row.key:<12}{lr * 100:8.2f}{lp * 100:8.2f}{f * 100:8.2f}"
                       f"{row.matched:8d}{row.gold:8d}{row.pred:8d}")
    out.append("")
    o = report.overall
    out.append(f"ALL {o.matched} {o.gold} {o.pred}")
    for row in report.lengths:
        out.append(f"LEN {row.key} {row.matched} {row.gold} {row.pred}")
    for row in report.labels:
        out.append(f"LABEL {row.key} {row.matched} {row.gold} {row.pred}")
    return "\n".join(out) + "\n"
