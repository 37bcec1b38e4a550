import io
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EXAMPLE_A, EXAMPLE_B, EXAMPLE_SEQ
from eqrw.axioms import CATEGORIES, Category
from eqrw.checker import NOT_EQUAL, RewriteSequence, check, parse_sequence
from eqrw.dataset import (
    REFERENCE_USAGE,
    BuildReport,
    DatasetStats,
    PruneRules,
    UsageBalancer,
    build,
    format_line,
    novelty,
    parse_line,
    read,
    split,
    stats,
    write,
)
from eqrw.errors import ExhaustionError, FormatError
from eqrw.generator import GenConfig, SampleTuple
from eqrw.lang import parse


def _chain(n_ops, leaf="a"):
    """Right-leaning ``+s`` chain with ``2 * n_ops + 1`` nodes."""
    text = leaf
    for _ in range(n_ops):
        text = f"( {leaf} +s {text} )"
    return parse(text)


def _example_sample():
    return SampleTuple(parse(EXAMPLE_A), parse(EXAMPLE_B), parse_sequence(EXAMPLE_SEQ))


def test_reference_usage_table():
    assert set(REFERENCE_USAGE) == set(CATEGORIES)
    assert REFERENCE_USAGE[Category.Commute] == 29.5
    assert REFERENCE_USAGE[Category.FactorLeft] == 2.1


def test_prune_pair_of_61_tokens():
    a, b = _chain(15), parse(f"( ns {_chain(14, 'b').text} )")
    assert a.size + b.size == 61
    assert PruneRules().violation(SampleTuple(a, b, RewriteSequence())) == "program nodes"
    relaxed = PruneRules(max_program_nodes=40, max_depth_edges=40)
    assert relaxed.violation(SampleTuple(a, b, RewriteSequence())) == "pair tokens"
    c = _chain(14, "c")
    assert relaxed.violation(SampleTuple(b, c, RewriteSequence())) is None


def test_prune_lexically_equal():
    a = parse("( a +s b )")
    assert PruneRules().violation(SampleTuple(a, a, RewriteSequence())) == "lexically equal"


def test_prune_depth_steps_and_sequence_tokens():
    rules = PruneRules()
    deep = parse("( ns ( ns ( ns ( ns ( ns ( ns a ) ) ) ) ) )")
    assert rules.violation(SampleTuple(deep, parse("a"), NOT_EQUAL)) == "depth"
    a, b = parse("( a +s b )"), parse("( b +s a )")
    assert rules.violation(SampleTuple(a, b, parse_sequence("Commute " * 6))) == "steps"
    long_paths = parse_sequence(" ".join(["left left left left left Commute"] * 5))
    assert long_paths.token_count == 30
    assert rules.violation(SampleTuple(a, b, long_paths)) == "sequence tokens"
    assert rules.violation(SampleTuple(a, b, parse_sequence("Commute"))) is None


def test_prune_rules_validation():
    with pytest.raises(ValueError):
        PruneRules(max_steps=0)
    with pytest.raises(ValueError):
        PruneRules(drop_short_fraction=1.5)


def test_build_output_is_pruned_unique_and_verified():
    report = BuildReport()
    samples = list(build(GenConfig(), n_target=1500, report=report))
    assert len(samples) == report.emitted == 1500
    keys = [s.key() for s in samples]
    assert len(set(keys)) == len(keys)
    rules = PruneRules()
    for s in samples:
        assert rules.violation(s) is None
        assert s.prog_a != s.prog_b
        assert check(s.prog_a, s.sequence, s.prog_b)
    assert report.dropped["lexically equal"] > 0
    assert report.attempts == report.emitted + sum(report.dropped.values())


def test_drop_short_fraction_controls_short_sequences():
    def short_share(frac):
        out = list(build(GenConfig(), PruneRules(drop_short_fraction=frac), 1000, balance=False))
        return sum(1 for s in out if len(s.sequence) <= 2) / len(out)

    assert short_share(1.0) == 0.0
    assert short_share(0.0) > short_share(0.5) > 0.0


def test_not_equal_share_tracks_request():
    out = list(build(GenConfig(), n_target=600, not_equal_frac=0.25))
    ne = sum(1 for s in out if s.outcome == NOT_EQUAL)
    assert abs(ne - 150) <= 1


def test_build_exhaustion():
    with pytest.raises(ExhaustionError):
        list(build(GenConfig(), n_target=100, max_attempts=50))


def test_balancer_starves_over_target_categories():
    bal = UsageBalancer(targets={c: 0.0 for c in CATEGORIES} | {Category.Noop: 50.0}, warmup=0, tolerance=0.0)
    for _ in range(5):
        bal.record({Category.Commute})
        bal.record({Category.Noop})
    assert not bal.wants({Category.Commute})
    assert bal.wants({Category.Noop})


def test_stats_single_sample():
    st_ = stats([_example_sample()])
    assert st_.count == 1
    pct = st_.percentages()
    assert pct[Category.DistributeRight] == 100.0
    assert pct[Category.Commute] == 100.0
    assert all(v == 0.0 for c, v in pct.items() if c not in (Category.DistributeRight, Category.Commute))
    assert "DistributeRight\t100.0%" in st_.format()


def test_stats_empty():
    st_ = stats([])
    assert st_.count == 0
    assert all(v == 0.0 for v in st_.percentages().values())


def test_stats_counts_a_category_once_per_sample():
    s = SampleTuple(parse("( a +s b )"), parse("( a +s b )"), parse_sequence("Commute Commute"))
    ne = SampleTuple(parse("( a +s b )"), parse("( a *s b )"), NOT_EQUAL)
    st_ = stats([s, ne])
    assert st_.usage[Category.Commute] == 1
    assert st_.percent(Category.Commute) == 50.0
    assert st_.not_equal == 1
    merged = st_.merge(st_)
    assert merged.count == 4 and merged.usage[Category.Commute] == 2


def test_example_line_format():
    line = format_line(_example_sample())
    assert line == f"{EXAMPLE_A}\t{EXAMPLE_B}\t{EXAMPLE_SEQ}"
    assert line.split("\t")[2] == "DistributeRight right Commute"


def test_not_equal_line():
    s = SampleTuple(parse("( a -s b )"), parse("( b -s a )"), NOT_EQUAL)
    assert format_line(s).split("\t")[2] == "Not_equal"
    assert parse_line(format_line(s)) == s


def test_round_trip_bytes(tmp_path):
    samples = list(build(GenConfig(rng_seed=3), n_target=10_000, not_equal_frac=0.1))
    first = tmp_path / "a.tsv"
    second = tmp_path / "b.tsv"
    assert write(samples, first) == 10_000
    back = list(read(first))
    assert back == samples
    write(back, second)
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.parametrize(
    "bad, fragment",
    [
        ("( a +s b )\t( b +s a )", "3 tab-separated"),
        ("( a +s b )\t( b +s A )\tCommute", "not defined"),
        ("( a +s b )\t( b +s a )\tSwap", "unknown sequence token"),
    ],
)
def test_format_errors_report_line(bad, fragment):
    text = f"{EXAMPLE_A}\t{EXAMPLE_B}\t{EXAMPLE_SEQ}\n{bad}\n"
    with pytest.raises(FormatError) as info:
        list(read(io.StringIO(text)))
    assert info.value.line == 2
    assert str(info.value).startswith("line 2:")
    assert fragment in str(info.value)


def test_split_counts():
    pool = [_example_sample()] * 100_000
    train, val, test = split(pool, (0.8, 0.1, 0.1))
    assert (len(train), len(val), len(test)) == (80_000, 10_000, 10_000)


def test_split_everything_in_train():
    samples = list(build(GenConfig(), n_target=50))
    train, val, test = split(samples, (1.0, 0.0, 0.0))
    assert len(train) == 50 and not val and not test


def test_split_rejects_bad_fractions():
    with pytest.raises(ValueError):
        split([], (0.5, 0.2, 0.2))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 300), st.integers(0, 10))
def test_split_is_a_seeded_partition(n, seed):
    items = [SampleTuple(_chain(1, "a"), _chain(i % 5 + 1, "b"), NOT_EQUAL) for i in range(n)]
    parts = split(items, (0.7, 0.2, 0.1), seed)
    assert sum(len(p) for p in parts) == n
    assert Counter(map(id, items)) == Counter(id(s) for p in parts for s in p)
    assert parts == split(items, (0.7, 0.2, 0.1), seed)


def test_build_splits_never_share_tuples():
    samples = list(build(GenConfig(rng_seed=5), n_target=3000))
    train, _, test = split(samples)
    assert not {s.key() for s in train} & {s.key() for s in test}
    assert 0.0 <= novelty(train, test) <= 1.0
    assert novelty(train, []) == 0.0
    assert novelty(train, train[:10]) == 0.0
