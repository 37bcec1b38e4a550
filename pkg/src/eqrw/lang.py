"""Token alphabet, typed expression trees, text format and tree paths.

Programs are written fully parenthesised with typed operator mnemonics::

    ( d *s ( ( ( ns e ) /s a ) -s c ) )
    ( tm ( A *m B ) )

Binary nodes print as ``( left op right )`` and unary nodes as
``( op child )``.  Tokens are separated by single spaces.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .errors import LexError, ParseError, PathError, SignatureError


class TypeTag(enum.Enum):
    SCALAR = "Scalar"
    MATRIX = "Matrix"
    VECTOR = "Vector"

    def __repr__(self) -> str:
        return self.value


S, M, V = TypeTag.SCALAR, TypeTag.MATRIX, TypeTag.VECTOR


@dataclass(frozen=True)
class OpToken:
    symbol: str
    arity: int
    result_type: TypeTag


@dataclass(frozen=True)
class TerminalToken:
    symbol: str
    type: TypeTag
    is_special: bool


OPS: dict[str, OpToken] = {
    sym: OpToken(sym, arity, rtype)
    for sym, arity, rtype in [
        ("+s", 2, S), ("-s", 2, S), ("*s", 2, S), ("/s", 2, S), ("is", 1, S), ("ns", 1, S),
        ("+m", 2, M), ("-m", 2, M), ("*m", 2, M), ("im", 1, M), ("nm", 1, M), ("tm", 1, M),
        ("+v", 2, V), ("-v", 2, V), ("*v", 2, V), ("nv", 1, V),
    ]
}
UNARY_OPS = frozenset(sym for sym, op in OPS.items() if op.arity == 1)
BINARY_OPS = frozenset(sym for sym, op in OPS.items() if op.arity == 2)

# operand type tuple -> result type, per operator
SIGNATURES: dict[str, tuple[tuple[TypeTag, ...], ...]] = {
    "+s": ((S, S),), "-s": ((S, S),), "*s": ((S, S),), "/s": ((S, S),),
    "is": ((S,),), "ns": ((S,),),
    "+m": ((M, M),), "-m": ((M, M),), "*m": ((M, M), (M, S), (S, M)),
    "im": ((M,),), "nm": ((M,),), "tm": ((M,),),
    "+v": ((V, V),), "-v": ((V, V),), "*v": ((M, V), (S, V), (V, S)),
    "nv": ((V,),),
}
_SIGNATURE_SET = frozenset((sym, sig) for sym, sigs in SIGNATURES.items() for sig in sigs)

SPECIAL_TERMINALS = frozenset("01OIo")
TERMINALS: dict[str, TerminalToken] = {}
for _syms, _type in (("abcde01", S), ("ABCDEOI", M), ("vwxyzo", V)):
    for _sym in _syms:
        TERMINALS[_sym] = TerminalToken(_sym, _type, _sym in SPECIAL_TERMINALS)
del _syms, _type, _sym

ZERO = {S: "0", M: "O", V: "o"}

# untyped glyphs used by the display mode only
_DISPLAY = {
    "+s": "+", "+m": "+", "+v": "+", "-s": "-", "-m": "-", "-v": "-",
    "*s": "*", "*m": "*", "*v": "*", "/s": "/",
    "ns": "-", "nm": "-", "nv": "-", "is": "inv", "im": "inv", "tm": "t",
}


def terminals_of(tag: TypeTag) -> list[str]:
    return [sym for sym, tok in TERMINALS.items() if tok.type is tag]


def ops_of(tag: TypeTag) -> list[str]:
    return [sym for sym, op in OPS.items() if op.result_type is tag]


class Expr:
    """Immutable typed expression tree.

    Equality and hashing go through the canonical text, which is built once
    at construction, so lexical comparison of programs is a string compare.
    """

    __slots__ = ("text", "type", "size", "depth")

    text: str
    type: TypeTag
    size: int
    depth: int

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __eq__(self, other):
        if not isinstance(other, Expr):
            return NotImplemented
        return self.text == other.text

    def __hash__(self):
        return hash(self.text)

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"{type(self).__name__}({self.text!r})"

    @property
    def is_terminal(self) -> bool:
        return isinstance(self, Terminal)


class Terminal(Expr):
    __slots__ = ("token",)

    token: TerminalToken

    def __init__(self, symbol: str):
        try:
            token = TERMINALS[symbol]
        except KeyError:
            raise LexError(f"unknown terminal {symbol!r}") from None
        _set = object.__setattr__
        _set(self, "token", token)
        _set(self, "text", symbol)
        _set(self, "type", token.type)
        _set(self, "size", 1)
        _set(self, "depth", 0)

    def __reduce__(self):
        return (Terminal, (self.text,))

    @property
    def symbol(self) -> str:
        return self.token.symbol


class Node(Expr):
    __slots__ = ("op", "left", "right")

    op: OpToken
    left: Expr
    right: Expr | None

    def __init__(self, op: str | OpToken, left: Expr, right: Expr | None = None):
        if isinstance(op, str):
            try:
                op = OPS[op]
            except KeyError:
                raise LexError(f"unknown operator {op!r}") from None
        if (right is None) != (op.arity == 1):
            raise ParseError(f"operator {op.symbol} takes {op.arity} operand(s)")
        if right is None:
            sig: tuple[TypeTag, ...] = (left.type,)
            text = f"( {op.symbol} {left.text} )"
            size = left.size + 1
            depth = left.depth + 1
        else:
            sig = (left.type, right.type)
            text = f"( {left.text} {op.symbol} {right.text} )"
            size = left.size + right.size + 1
            depth = (left.depth if left.depth > right.depth else right.depth) + 1
        if (op.symbol, sig) not in _SIGNATURE_SET:
            names = ", ".join(t.value for t in sig)
            raise SignatureError(f"{op.symbol} is not defined on ({names})")
        _set = object.__setattr__
        _set(self, "op", op)
        _set(self, "left", left)
        _set(self, "right", right)
        _set(self, "text", text)
        _set(self, "type", op.result_type)
        _set(self, "size", size)
        _set(self, "depth", depth)

    def __reduce__(self):
        return (Node, (self.op.symbol, self.left, self.right))

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.left,) if self.right is None else (self.left, self.right)


# --- text format -----------------------------------------------------------

_VOCAB = frozenset(OPS) | frozenset(TERMINALS) | {"(", ")"}


def tokenize(text: str) -> list[str]:
    tokens = text.split()
    for tok in tokens:
        if tok not in _VOCAB:
            raise LexError(f"unknown token {tok!r}")
    return tokens


def parse(text: str) -> Expr:
    """Parse canonical program text into a well-typed expression.

    Raises LexError for unknown tokens, ParseError for structural problems and
    SignatureError when an operator is applied to operands of the wrong type.
    """
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty program")
    expr, pos = _parse_at(tokens, 0)
    if pos != len(tokens):
        raise ParseError(f"unexpected trailing token {tokens[pos]!r} at position {pos}")
    return expr


def _expect(tokens: list[str], pos: int) -> str:
    if pos >= len(tokens):
        raise ParseError("unexpected end of input")
    return tokens[pos]


def _parse_at(tokens: list[str], pos: int) -> tuple[Expr, int]:
    tok = _expect(tokens, pos)
    if tok in TERMINALS:
        return Terminal(tok), pos + 1
    if tok != "(":
        raise ParseError(f"unexpected {tok!r} at position {pos}")
    head = _expect(tokens, pos + 1)
    if head in UNARY_OPS:
        child, pos = _parse_at(tokens, pos + 2)
        if _expect(tokens, pos) != ")":
            raise ParseError(f"unary {head} expects one operand, found {tokens[pos]!r} at position {pos}")
        return Node(head, child), pos + 1
    if head in BINARY_OPS:
        raise ParseError(f"binary {head} at position {pos + 1} is missing its left operand")
    left, pos = _parse_at(tokens, pos + 1)
    op = _expect(tokens, pos)
    if op not in BINARY_OPS:
        raise ParseError(f"expected a binary operator at position {pos}, found {op!r}")
    right, pos = _parse_at(tokens, pos + 1)
    if _expect(tokens, pos) != ")":
        raise ParseError(f"expected ')' at position {pos}, found {tokens[pos]!r}")
    return Node(op, left, right), pos + 1


def to_text(e: Expr, display: bool = False) -> str:
    """Render ``e`` as canonical text, or with untyped glyphs if ``display``.

    Display text is for humans only; it cannot be parsed back because the
    untyped glyphs are ambiguous across scalar, matrix and vector operators.
    """
    if not display:
        return e.text
    if isinstance(e, Terminal):
        return e.text
    glyph = _DISPLAY[e.op.symbol]
    if e.right is None:
        return f"( {glyph} {to_text(e.left, True)} )"
    return f"( {to_text(e.left, True)} {glyph} {to_text(e.right, True)} )"


def infer_type(e: Expr) -> TypeTag:
    """Result type of ``e``; re-validates every node against the signature table."""
    if isinstance(e, Node):
        sig = tuple(infer_type(c) for c in e.children)
        if (e.op.symbol, sig) not in _SIGNATURE_SET:
            raise SignatureError(f"{e.op.symbol} is not defined on {sig}")
        return e.op.result_type
    return e.type


class Metrics(NamedTuple):
    node_count: int
    depth_edges: int


def metrics(e: Expr) -> Metrics:
    return Metrics(e.size, e.depth)


# --- paths -----------------------------------------------------------------

Path = tuple[str, ...]
SELECTORS = ("left", "right")


def _child(e: Expr, sel: str, path: Path) -> Expr:
    if isinstance(e, Node):
        if sel == "left":
            return e.left
        if sel == "right" and e.right is not None:
            return e.right
    raise PathError(f"path {format_path(path)!r} does not resolve at selector {sel!r}")


def subtree_at(e: Expr, path: Path) -> Expr:
    for sel in path:
        e = _child(e, sel, path)
    return e


def replace_at(e: Expr, path: Path, new: Expr) -> Expr:
    """Return ``e`` with the subtree at ``path`` swapped for ``new``.

    Subtrees off the path are shared with ``e``, not copied.
    """
    if not path:
        return new
    sel, rest = path[0], path[1:]
    child = _child(e, sel, path)
    assert isinstance(e, Node)
    replaced = replace_at(child, rest, new)
    if sel == "left":
        return Node(e.op, replaced, e.right)
    return Node(e.op, e.left, replaced)


def walk(e: Expr, path: Path = ()) -> Iterator[tuple[Path, Expr]]:
    """Yield ``(path, subtree)`` for every position, in pre-order."""
    yield path, e
    if isinstance(e, Node):
        yield from walk(e.left, path + ("left",))
        if e.right is not None:
            yield from walk(e.right, path + ("right",))


def format_path(path: Path) -> str:
    return " ".join(path)
