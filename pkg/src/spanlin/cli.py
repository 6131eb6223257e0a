"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 legality or invariant failure.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from pathlib import Path

from . import bench, checks
from .decoder import (
    LabelTable,
    assign_labels,
    decode,
    load_labels,
    load_scores,
    normalize,
    one_hot_scores,
    save_labels,
    save_scores,
)
from .errors import IllegalLinearizationError, InputError, SpanlinError
from .evaluation import breakdowns, format_report, score_corpus
from .linearization import MODES, format_linearization, linearize, parse_linearization, reconstruct
from .treebank import (
    binarize,
    debinarize,
    parse_bracketed,
    parse_with_lines,
    preprocess,
    print_bracketed,
)
from .trees import UNLABELED

EXIT_INPUT = 1
EXIT_INVARIANT = 2


class InvariantFailure(SpanlinError):
    pass


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as f:
            yield f


def _read(path) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _prepared(text: str):
    """Preprocessed, binarized trees; errors name the tree index and line."""
    out = []
    for k, (tree, line) in enumerate(parse_with_lines(text), start=1):
        try:
            out.append(binarize(preprocess(tree)))
        except InputError as e:
            raise InputError(f"tree {k} (line {line}): {e}") from None
    return out


def _tokens(path, count):
    if path is None:
        return [None] * count
    rows = [line.split() for line in _read(path).splitlines() if line.strip()]
    if len(rows) != count:
        raise InputError(f"{path}: {len(rows)} sentences, expected {count}")
    return [[(w, UNLABELED) for w in row] for row in rows]


def cmd_linearize(args) -> int:
    trees = _prepared(_read(args.input))
    with _output(args.output) as out:
        for bt in trees:
            out.write(format_linearization(linearize(bt)) + "\n")
    return 0


def cmd_reconstruct(args) -> int:
    if args.mode not in MODES:
        raise InputError(f"mode {args.mode!r} needs probabilities; use one of {', '.join(MODES)}")
    results = []
    for lineno, line in enumerate(_read(args.input).splitlines(), start=1):
        if not line.strip():
            continue
        d = parse_linearization(line, lineno)
        try:
            tree = reconstruct(d, args.mode)
        except IllegalLinearizationError as e:
            raise IllegalLinearizationError(f"line {lineno}: {e}") from None
        results.append(print_bracketed(debinarize(tree)))
    with _output(args.output) as out:
        for text in results:
            out.write(text + "\n")
    return 0


def cmd_decode(args) -> int:
    scores = load_scores(Path(args.scores))
    tables = load_labels(Path(args.labels)) if args.labels else [None] * len(scores)
    if len(tables) != len(scores):
        raise InputError(f"{len(scores)} score matrices but {len(tables)} label tables")
    words = _tokens(args.tokens, len(scores))
    results = []
    for k, (s, lt, leaves) in enumerate(zip(scores, tables, words), start=1):
        if lt is not None and lt.n != s.n:
            raise InputError(f"sentence {k}: label table has n={lt.n}, scores have n={s.n}")
        if leaves is not None and len(leaves) != s.n:
            raise InputError(f"sentence {k}: {len(leaves)} tokens, scores have n={s.n}")
        try:
            tree = decode(normalize(s), args.mode, leaves)
        except IllegalLinearizationError as e:
            raise IllegalLinearizationError(f"sentence {k}: {e}") from None
        try:
            tree = assign_labels(tree, lt) if lt is not None else tree
        except InputError as e:
            raise InputError(f"sentence {k}: {e}") from None
        results.append(print_bracketed(debinarize(tree)))
    with _output(args.output) as out:
        for text in results:
            out.write(text + "\n")
    return 0


def cmd_encode(args) -> int:
    trees = _prepared(_read(args.input))
    save_scores(Path(args.scores), [one_hot_scores(bt, args.margin) for bt in trees])
    if args.labels:
        save_labels(Path(args.labels), [LabelTable.one_hot(bt) for bt in trees])
    return 0


def _eval_trees(text):
    out = []
    for k, (tree, line) in enumerate(parse_with_lines(text), start=1):
        try:
            out.append(preprocess(tree))
        except InputError as e:
            raise InputError(f"tree {k} (line {line}): {e}") from None
    return out


def cmd_eval(args) -> int:
    gold = _eval_trees(_read(args.gold))
    pred = _eval_trees(_read(args.pred))
    counts = score_corpus(gold, pred, args.ignore_labels)
    with _output(args.output) as out:
        out.write(format_report(breakdowns(counts, args.bucket_width)))
    return 0


def cmd_check(args) -> int:
    if args.input:
        trees = parse_bracketed(_read(args.input))
    else:
        trees = checks.random_corpus(args.random, args.seed, args.max_n)
    count, failure = checks.check_corpus(trees)
    if failure is not None:
        raise InvariantFailure(str(failure))
    print(f"checked {count} trees: all invariants hold")
    return 0


def cmd_bench(args) -> int:
    rows = bench.run(args.sizes, args.shapes, args.modes, args.trees, args.seed)
    with _output(args.output) as out:
        out.write(bench.format_rows(rows, args.timings))
        if args.cky_sizes:
            out.write("\nn\tcky_seconds\n")
            for n, secs in bench.cky_timings(args.cky_sizes, args.seed):
                out.write(f"{n}\t{secs:.4f}\n")
    return 0


def cmd_oracle_test(args) -> int:
    results = [checks.legality_agreement(args.max_n),
               checks.cky_agreement(range(2, args.cky_max_n + 1), args.trials, args.seed)]
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}\t{r.name}\t{r.detail}")
    return 0 if all(r.passed for r in results) else EXIT_INVARIANT


def _csv(kind=str):
    def parse(text):
        return [kind(x) for x in text.split(",") if x]
    return parse


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spanlin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("linearize", help="bracketed trees -> linearizations")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("reconstruct", help="linearizations -> X-labeled trees")
    p.add_argument("input")
    p.add_argument("--mode", default="exact", choices=MODES + ("cky",))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("decode", help="score matrices (+ label tables) -> trees")
    p.add_argument("scores")
    p.add_argument("--labels")
    p.add_argument("--tokens", help="one space-separated sentence per line")
    p.add_argument("--mode", default="argmin", choices=MODES + ("cky",))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("encode", help="gold trees -> one-hot score and label files")
    p.add_argument("input")
    p.add_argument("--scores", required=True)
    p.add_argument("--labels")
    p.add_argument("--margin", type=float, default=1000.0)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("eval", help="labeled bracket scores with breakdowns")
    p.add_argument("gold")
    p.add_argument("pred")
    p.add_argument("--ignore-labels", type=_csv(), default=[])
    p.add_argument("--bucket-width", type=_positive, default=5)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check", help="run the invariant suite on trees")
    p.add_argument("input", nargs="?")
    p.add_argument("--random", type=int, default=1000, help="random trees when no input is given")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=_positive, default=40)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="split-search work against sentence length")
    p.add_argument("--sizes", type=_csv(int), default=list(bench.DEFAULT_SIZES))
    p.add_argument("--shapes", type=_csv(), default=list(bench.SHAPES))
    p.add_argument("--modes", type=_csv(), default=list(MODES))
    p.add_argument("--trees", type=_positive, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--cky-sizes", type=_csv(int), default=[])
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle-test", help="compare against brute-force enumeration")
    p.add_argument("--max-n", type=_positive, default=7)
    p.add_argument("--cky-max-n", type=_positive, default=8)
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_test)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IllegalLinearizationError, InvariantFailure) as e:
        print(f"spanlin {args.command}: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InputError, ValueError) as e:
        print(f"spanlin {args.command}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
