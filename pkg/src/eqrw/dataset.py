"""Corpus pipeline: generation, pruning, balancing, statistics, files, splits."""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping

from .axioms import CATEGORIES, Category
from .checker import NOT_EQUAL, RewriteSequence, check, parse_sequence
from .errors import DegenerateInput, EqrwError, ExhaustionError, FormatError
from .generator import GenConfig, SampleTuple, gen_sample, sample_rng
from .lang import parse

# reference share of samples using each category, in percent
REFERENCE_USAGE: dict[Category, float] = {
    Category.Cancel: 13.0,
    Category.Noop: 29.2,
    Category.Double: 7.5,
    Category.Commute: 29.5,
    Category.DistributeLeft: 28.0,
    Category.DistributeRight: 19.6,
    Category.FactorLeft: 2.1,
    Category.FactorRight: 3.1,
    Category.AssociativeLeft: 16.6,
    Category.AssociativeRight: 16.2,
    Category.FlipLeft: 9.7,
    Category.FlipRight: 23.2,
    Category.Transpose: 10.1,
}


@dataclass(frozen=True)
class PruneRules:
    max_pair_tokens: int = 60
    max_depth_edges: int = 5
    max_steps: int = 5
    max_seq_tokens: int = 25
    max_program_nodes: int = 30
    drop_short_fraction: float = 0.5

    def __post_init__(self):
        for name in ("max_pair_tokens", "max_depth_edges", "max_steps", "max_seq_tokens", "max_program_nodes"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.drop_short_fraction <= 1.0:
            raise ValueError("drop_short_fraction must be a probability")

    def violation(self, s: SampleTuple) -> str | None:
        """Name of the first bound ``s`` breaks, or None if it fits."""
        a, b = s.prog_a, s.prog_b
        if a.text == b.text:
            return "lexically equal"
        if a.size > self.max_program_nodes or b.size > self.max_program_nodes:
            return "program nodes"
        if a.size + b.size > self.max_pair_tokens:
            return "pair tokens"
        if a.depth > self.max_depth_edges or b.depth > self.max_depth_edges:
            return "depth"
        seq = s.sequence
        if seq is not None:
            if len(seq) > self.max_steps:
                return "steps"
            if seq.token_count > self.max_seq_tokens:
                return "sequence tokens"
        return None


@dataclass
class UsageBalancer:
    """Acceptance filter steering per-category usage toward ``targets`` (percent).

    With usage shares ``p`` and targets ``t``, accepting a sample that uses
    the category set ``C`` moves the squared distance ``sum((p - t) ** 2)``
    by a quantity proportional to ``sum_{c in C}(p_c - t_c) - sum_c (p_c - t_c) p_c``.
    Samples are accepted while that quantity stays below ``tolerance``, so
    categories above target are starved and those below are favoured.
    """

    targets: Mapping[Category, float] = field(default_factory=lambda: dict(REFERENCE_USAGE))
    tolerance: float = 0.01
    warmup: int = 50
    counts: Counter = field(default_factory=Counter)
    total: int = 0

    def wants(self, cats: Iterable[Category]) -> bool:
        if self.total < self.warmup:
            return True
        cats = set(cats)
        baseline = excess = 0.0
        for c in CATEGORIES:
            p = self.counts[c] / self.total
            gap = p - self.targets.get(c, 0.0) / 100.0
            baseline += gap * p
            if c in cats:
                excess += gap
        return excess <= baseline + self.tolerance

    def record(self, cats: Iterable[Category]) -> None:
        self.total += 1
        self.counts.update(set(cats))


@dataclass
class BuildReport:
    attempts: int = 0
    emitted: int = 0
    dropped: Counter = field(default_factory=Counter)


def build(
    cfg: GenConfig,
    rules: PruneRules | None = None,
    n_target: int = 50_000,
    not_equal_frac: float = 0.0,
    balance: UsageBalancer | None | bool = True,
    max_attempts: int | None = None,
    report: BuildReport | None = None,
) -> Iterator[SampleTuple]:
    """Yield ``n_target`` pruned, unique, re-verified samples.

    Sample ``i`` is generated from its own RNG stream seeded by
    ``(cfg.rng_seed, i)``, so the output is a pure function of the arguments.
    ``balance=True`` uses a UsageBalancer aimed at REFERENCE_USAGE; pass
    ``None``/``False`` for the raw generator distribution.  The emitted share
    of Not_equal samples tracks ``not_equal_frac``.
    """
    if n_target < 1:
        raise ValueError("n_target must be at least 1")
    rules = rules or PruneRules()
    if balance is True:
        balance = UsageBalancer()
    elif balance is False:
        balance = None
    if max_attempts is None:
        max_attempts = 200 * n_target + 10_000
    report = report if report is not None else BuildReport()
    seen: set[tuple[str, str, str]] = set()
    n_unequal = 0
    index = 0
    while report.emitted < n_target:
        if index >= max_attempts:
            raise ExhaustionError(
                f"only {report.emitted} of {n_target} samples after {index} attempts"
            )
        report.attempts += 1
        try:
            s = gen_sample(cfg, index, not_equal_frac)
        except DegenerateInput:
            report.dropped["degenerate"] += 1
            index += 1
            continue
        # separate stream so pruning choices never perturb generation
        coin = sample_rng(cfg.rng_seed, -1 - index).random()
        index += 1
        reason = rules.violation(s)
        seq = s.sequence
        if reason is None and seq is not None:
            if len(seq) <= 2 and coin < rules.drop_short_fraction:
                reason = "short sequence"
            elif balance is not None and not balance.wants(seq.categories()):
                reason = "balance"
        if reason is None and not_equal_frac > 0:
            # corrupted pairs skip most filters, so hold both kinds to their share
            emitted_kind = n_unequal if seq is None else report.emitted - n_unequal
            share = not_equal_frac if seq is None else 1.0 - not_equal_frac
            if emitted_kind >= share * (report.emitted + 1) + 1:
                reason = "ratio"
        if reason is None and s.key() in seen:
            reason = "duplicate"
        if reason is None and seq is not None and not check(s.prog_a, seq, s.prog_b):
            raise AssertionError(f"generated sequence failed to verify: {s.key()}")
        if reason is not None:
            report.dropped[reason] += 1
            continue
        seen.add(s.key())
        n_unequal += seq is None
        if balance is not None and seq is not None:
            balance.record(seq.categories())
        report.emitted += 1
        yield s


@dataclass
class DatasetStats:
    count: int = 0
    not_equal: int = 0
    usage: Counter = field(default_factory=Counter)
    step_hist: Counter = field(default_factory=Counter)
    node_hist: Counter = field(default_factory=Counter)

    def percent(self, cat: Category) -> float:
        return 100.0 * self.usage[cat] / self.count if self.count else 0.0

    def percentages(self) -> dict[Category, float]:
        return {c: self.percent(c) for c in CATEGORIES}

    def merge(self, other: "DatasetStats") -> "DatasetStats":
        return DatasetStats(
            self.count + other.count,
            self.not_equal + other.not_equal,
            self.usage + other.usage,
            self.step_hist + other.step_hist,
            self.node_hist + other.node_hist,
        )

    def format(self) -> str:
        lines = [f"samples\t{self.count}"]
        if self.not_equal:
            lines.append(f"Not_equal\t{100.0 * self.not_equal / self.count:.1f}%")
        for c in CATEGORIES:
            lines.append(f"{c.value}\t{self.percent(c):.1f}%")
        for k in sorted(self.step_hist):
            lines.append(f"steps={k}\t{100.0 * self.step_hist[k] / self.count:.1f}%")
        return "\n".join(lines)


def stats(samples: Iterable[SampleTuple]) -> DatasetStats:
    """Per-category usage: share of samples using the category at least once.

    Not_equal samples count towards the sample total but use no category.
    """
    out = DatasetStats()
    for s in samples:
        out.count += 1
        out.node_hist[s.prog_a.size] += 1
        out.node_hist[s.prog_b.size] += 1
        seq = s.sequence
        if seq is None:
            out.not_equal += 1
            continue
        out.step_hist[len(seq)] += 1
        out.usage.update(seq.categories())
    return out


# --- files -----------------------------------------------------------------

def format_line(s: SampleTuple) -> str:
    return f"{s.prog_a.text}\t{s.prog_b.text}\t{s.outcome_text()}"


def parse_line(line: str, lineno: int | None = None) -> SampleTuple:
    fields = line.rstrip("\n").split("\t")
    if len(fields) != 3:
        raise FormatError(f"expected 3 tab-separated fields, found {len(fields)}", lineno)
    try:
        a = parse(fields[0])
        b = parse(fields[1])
        outcome: RewriteSequence | str = NOT_EQUAL if fields[2] == NOT_EQUAL else parse_sequence(fields[2])
    except EqrwError as exc:
        raise FormatError(str(exc), lineno) from exc
    return SampleTuple(a, b, outcome)


def write(samples: Iterable[SampleTuple], dest: str | Path | IO[str]) -> int:
    """Write one sample per line; returns the number of lines written."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            return write(samples, fh)
    n = 0
    for s in samples:
        dest.write(format_line(s) + "\n")
        n += 1
    return n


def read(src: str | Path | IO[str]) -> Iterator[SampleTuple]:
    if isinstance(src, (str, Path)):
        with open(src, encoding="utf-8") as fh:
            yield from read(fh)
        return
    for lineno, line in enumerate(src, 1):
        if line.strip():
            yield parse_line(line, lineno)


# --- splits ----------------------------------------------------------------

def split(
    samples: Iterable[SampleTuple],
    fractions: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> tuple[list[SampleTuple], list[SampleTuple], list[SampleTuple]]:
    """Seeded shuffle, then cut into train / validation / test."""
    if any(f < 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must be non-negative and sum to 1, got {fractions}")
    items = list(samples)
    random.Random(seed).shuffle(items)
    n = len(items)
    n_train = round(n * fractions[0])
    n_val = min(round(n * fractions[1]), n - n_train)
    return items[:n_train], items[n_train:n_train + n_val], items[n_train + n_val:]


def novelty(train: Iterable[SampleTuple], test: Iterable[SampleTuple]) -> float:
    """Share of test pairs with at least one program never seen in training."""
    seen = set()
    for s in train:
        seen.add(s.prog_a.text)
        seen.add(s.prog_b.text)
    test = list(test)
    if not test:
        return 0.0
    fresh = sum(1 for s in test if s.prog_a.text not in seen or s.prog_b.text not in seen)
    return fresh / len(test)
