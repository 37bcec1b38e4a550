import pickle

import pytest
from hypothesis import given, settings

from conftest import EXAMPLE_A, any_program
from eqrw.errors import LexError, ParseError, PathError, SignatureError
from eqrw.generator import GenConfig, gen_src, sample_rng
from eqrw.lang import (
    Metrics,
    Node,
    Terminal,
    TypeTag,
    infer_type,
    metrics,
    parse,
    replace_at,
    subtree_at,
    to_text,
    walk,
)


def test_parse_smallest_binary():
    e = parse("( a +s b )")
    assert isinstance(e, Node)
    assert e.op.symbol == "+s"
    assert e.left == Terminal("a") and e.right == Terminal("b")


def test_parse_example_program():
    e = parse(EXAMPLE_A)
    assert metrics(e) == Metrics(node_count=8, depth_edges=4)
    assert sum(1 for _, n in walk(e) if isinstance(n, Node)) == 4


def test_scalar_plus_matrix_is_a_type_error():
    with pytest.raises(SignatureError):
        parse("( a +s A )")
    with pytest.raises(TypeError):
        parse("( a +s A )")


@pytest.mark.parametrize(
    "text, exc",
    [
        ("", ParseError),
        ("( a +s b", ParseError),
        ("( a b )", ParseError),
        ("( +s a b )", ParseError),
        ("( a +s b ) c", ParseError),
        ("( tm A B )", ParseError),
        ("( a + b )", LexError),
        ("( q +s b )", LexError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse(text)


def test_print_layout():
    assert to_text(Node("+s", Terminal("a"), Terminal("b"))) == "( a +s b )"
    assert to_text(Node("tm", Terminal("A"))) == "( tm A )"


def test_display_mode_uses_untyped_glyphs():
    e = parse("( ( tm A ) *m ( B +m ( nm C ) ) )")
    assert to_text(e, display=True) == "( ( t A ) * ( B + ( - C ) ) )"


@pytest.mark.parametrize(
    "text, tag",
    [
        ("a", TypeTag.SCALAR),
        ("( A *v v )", TypeTag.VECTOR),
        ("( A *m a )", TypeTag.MATRIX),
        ("( a *m A )", TypeTag.MATRIX),
        ("( v *v a )", TypeTag.VECTOR),
        ("( a *v v )", TypeTag.VECTOR),
        ("( is ( a /s 1 ) )", TypeTag.SCALAR),
    ],
)
def test_infer_type(text, tag):
    assert infer_type(parse(text)) is tag


@pytest.mark.parametrize("text", ["( v *v A )", "( A *m v )", "( a *v b )", "( v +v A )", "( tm v )"])
def test_signature_table_rejects(text):
    with pytest.raises(SignatureError):
        parse(text)


def test_metrics_small_cases():
    assert metrics(Terminal("a")) == (1, 0)
    assert metrics(parse("( a +s b )")) == (3, 1)


def test_expr_is_immutable_and_hashable():
    e = parse("( a +s b )")
    with pytest.raises(AttributeError):
        e.text = "x"
    assert {e, parse("( a +s b )")} == {e}
    assert pickle.loads(pickle.dumps(e)) == e


def test_paths():
    e = parse(EXAMPLE_A)
    assert subtree_at(e, ("right", "left", "left")).text == "( ns e )"
    assert subtree_at(e, ("right", "left", "left", "left")).text == "e"
    with pytest.raises(PathError):
        subtree_at(e, ("right", "left", "left", "right"))
    with pytest.raises(PathError):
        subtree_at(e, ("left", "left"))
    new = replace_at(e, ("right", "right"), Terminal("1"))
    assert new.text == "( d *s ( ( ( ns e ) /s a ) -s 1 ) )"
    assert new.left is e.left
    assert new.right.left is e.right.left


def test_walk_is_preorder():
    e = parse("( ( a +s b ) *s ( ns c ) )")
    assert [p for p, _ in walk(e)] == [
        (), ("left",), ("left", "left"), ("left", "right"), ("right",), ("right", "left"),
    ]


@settings(max_examples=300, deadline=None)
@given(any_program)
def test_round_trip_property(e):
    text = to_text(e)
    assert parse(text) == e
    assert to_text(parse(text)) == text


@settings(max_examples=300, deadline=None)
@given(any_program)
def test_node_count_is_non_paren_token_count(e):
    tokens = to_text(e).split()
    assert metrics(e).node_count == sum(1 for t in tokens if t not in "()")
    assert metrics(e).node_count == sum(1 for _ in walk(e))
    # independent depth: max nesting of parentheses, minus one
    level = deepest = 0
    for t in tokens:
        level += t == "("
        level -= t == ")"
        deepest = max(deepest, level)
    assert metrics(e).depth_edges == max(deepest, 0)


def test_round_trip_on_generated_programs():
    cfg = GenConfig()
    for i in range(10_000):
        e = gen_src(cfg, sample_rng(7, i))
        assert parse(e.text) == e
        assert infer_type(e) is e.type
