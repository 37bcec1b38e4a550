"""Command line entry point: ``eqrw generate|check|prove|stats|split|catalog``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import dataset
from .axioms import catalog_table
from .checker import NOT_EQUAL, Proven, check, parse_sequence
from .errors import EqrwError, SearchFailure
from .generator import GenConfig
from .lang import parse
from .prover import SearchConfig, prove


def _read_program(path: str):
    return parse(Path(path).read_text(encoding="utf-8"))


def cmd_generate(args) -> int:
    cfg = GenConfig(rng_seed=args.seed)
    rules = dataset.PruneRules(drop_short_fraction=args.drop_short)
    report = dataset.BuildReport()
    samples = dataset.build(
        cfg,
        rules,
        args.count,
        not_equal_frac=args.not_equal_frac,
        balance=not args.no_balance,
        report=report,
    )
    n = dataset.write(samples, args.out)
    print(f"wrote {n} samples to {args.out} ({report.attempts} generated, drop-short {100 * args.drop_short:.1f}%)")
    return 0


def cmd_check(args) -> int:
    a = _read_program(args.prog_a)
    b = _read_program(args.prog_b)
    verdict = check(a, parse_sequence(args.sequence), b)
    print(verdict)
    return 0 if isinstance(verdict, Proven) else 1


def cmd_prove(args) -> int:
    a = _read_program(args.prog_a)
    b = _read_program(args.prog_b)
    cfg = SearchConfig(max_steps=args.max_steps, max_frontier=args.budget, time_budget=args.time_budget)
    try:
        seq = prove(a, b, cfg)
    except SearchFailure as exc:
        print(NOT_EQUAL)
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(seq.to_text())
    return 0


def cmd_stats(args) -> int:
    print(dataset.stats(dataset.read(args.file)).format())
    return 0


def cmd_split(args) -> int:
    src = Path(args.file)
    train, val, test = dataset.split(dataset.read(src), (args.train, args.val, args.test), seed=args.seed)
    total = len(train) + len(val) + len(test)
    for name, part in (("train", train), ("val", val), ("test", test)):
        dest = src.with_name(f"{src.stem}.{name}{src.suffix}")
        dataset.write(part, dest)
        share = 100.0 * len(part) / total if total else 0.0
        print(f"{name}\t{len(part)}\t{share:.1f}%\t{dest}")
    print(f"test novelty\t{100.0 * dataset.novelty(train, test):.1f}%")
    return 0


def cmd_catalog(args) -> int:
    print("id\tcategory\tpattern\ttemplate")
    for row in catalog_table():
        print(f"{row['id']}\t{row['category']}\t{row['pattern']}\t{row['template']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eqrw", description="Rewrite-rule engine for program equivalence.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a corpus of program pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50_000)
    p.add_argument("--out", required=True)
    p.add_argument("--not-equal-frac", type=float, default=0.0)
    p.add_argument("--drop-short", type=float, default=0.5, help="share of 1-2 step samples to drop")
    p.add_argument("--no-balance", action="store_true", help="keep the raw category distribution")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("check", help="verify a rewrite sequence between two program files")
    p.add_argument("prog_a")
    p.add_argument("sequence")
    p.add_argument("prog_b")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("prove", help="search for a rewrite sequence between two program files")
    p.add_argument("prog_a")
    p.add_argument("prog_b")
    p.add_argument("--max-steps", type=int, default=5)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--time-budget", type=float, default=None)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("stats", help="category usage of a corpus file")
    p.add_argument("file")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("split", help="split a corpus into train/val/test files")
    p.add_argument("file")
    p.add_argument("--train", type=float, default=0.8)
    p.add_argument("--val", type=float, default=0.1)
    p.add_argument("--test", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("catalog", help="print the rule table")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EqrwError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
