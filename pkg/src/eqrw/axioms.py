"""The 102 directed rewrite rules and their application at a path.

Rule patterns and templates are written in the ordinary program syntax.
Inside a rule, the letters ``a-e``, ``A-E`` and ``v-z`` are metavariables
standing for any subexpression of the letter's type, while ``0 1 O I o``
remain literal constants.  A metavariable repeated in a pattern must bind
structurally equal subtrees.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import NotApplicable
from .lang import (
    SPECIAL_TERMINALS,
    Expr,
    Node,
    Path,
    Terminal,
    parse,
    replace_at,
    subtree_at,
)


class Category(enum.Enum):
    Cancel = "Cancel"
    Noop = "Noop"
    Double = "Double"
    Commute = "Commute"
    DistributeLeft = "DistributeLeft"
    DistributeRight = "DistributeRight"
    FactorLeft = "FactorLeft"
    FactorRight = "FactorRight"
    AssociativeLeft = "AssociativeLeft"
    AssociativeRight = "AssociativeRight"
    FlipLeft = "FlipLeft"
    FlipRight = "FlipRight"
    Transpose = "Transpose"

    def __repr__(self) -> str:
        return self.value


CATEGORIES: tuple[Category, ...] = tuple(Category)
_CATEGORY_INDEX = {cat: i for i, cat in enumerate(CATEGORIES)}

Bindings = Mapping[str, Expr]


@dataclass(frozen=True)
class AxiomRule:
    id: int
    category: Category
    pattern: Expr
    template: Expr
    # metavariable -> literal it may not bind; keeps overlapping Noop rules exclusive
    excludes: tuple[tuple[str, str], ...] = field(default=())

    @property
    def metavariables(self) -> frozenset[str]:
        return _metavars(self.pattern)

    def match(self, e: Expr) -> dict[str, Expr] | None:
        bindings: dict[str, Expr] = {}
        if not _match(self.pattern, e, bindings):
            return None
        for var, literal in self.excludes:
            if bindings[var].text == literal:
                return None
        return bindings

    def instantiate(self, bindings: Bindings) -> Expr:
        return _instantiate(self.template, bindings)

    def __str__(self) -> str:
        return f"{self.id} {self.category.value}: {self.pattern.text} -> {self.template.text}"


def _metavars(e: Expr) -> frozenset[str]:
    if isinstance(e, Terminal):
        return frozenset() if e.text in SPECIAL_TERMINALS else frozenset({e.text})
    assert isinstance(e, Node)
    out = _metavars(e.left)
    if e.right is not None:
        out |= _metavars(e.right)
    return out


def _match(pat: Expr, e: Expr, bindings: dict[str, Expr]) -> bool:
    if isinstance(pat, Terminal):
        sym = pat.text
        if sym in SPECIAL_TERMINALS:
            return e.text == sym
        if e.type is not pat.type:
            return False
        bound = bindings.get(sym)
        if bound is None:
            bindings[sym] = e
            return True
        return bound.text == e.text
    if not isinstance(e, Node) or e.op is not pat.op:
        return False
    if not _match(pat.left, e.left, bindings):
        return False
    if pat.right is None:
        return True
    return _match(pat.right, e.right, bindings)


def _instantiate(tmpl: Expr, bindings: Bindings) -> Expr:
    if isinstance(tmpl, Terminal):
        if tmpl.text in SPECIAL_TERMINALS:
            return tmpl
        return bindings[tmpl.text]
    assert isinstance(tmpl, Node)
    left = _instantiate(tmpl.left, bindings)
    if tmpl.right is None:
        return Node(tmpl.op, left)
    return Node(tmpl.op, left, _instantiate(tmpl.right, bindings))


C = Category
_TABLE: list[tuple[int, Category, str, str]] = [
    (1, C.Cancel, "( a -s a )", "0"),
    (2, C.Cancel, "( b /s b )", "1"),
    (3, C.Cancel, "( A -m A )", "O"),
    (4, C.Cancel, "( v -v v )", "o"),
    (5, C.Noop, "( a +s 0 )", "a"),
    (6, C.Noop, "( 0 +s a )", "a"),
    (7, C.Noop, "( a -s 0 )", "a"),
    (8, C.Noop, "( a *s 1 )", "a"),
    (9, C.Noop, "( 1 *s a )", "a"),
    (10, C.Noop, "( a /s 1 )", "a"),
    (11, C.Noop, "( A +m O )", "A"),
    (12, C.Noop, "( O +m A )", "A"),
    (13, C.Noop, "( A -m O )", "A"),
    (14, C.Noop, "( A *m I )", "A"),
    (15, C.Noop, "( I *m A )", "A"),
    (16, C.Noop, "( v +v o )", "v"),
    (17, C.Noop, "( o +v v )", "v"),
    (18, C.Noop, "( v -v o )", "v"),
    (19, C.Double, "( ns ( ns a ) )", "a"),
    (20, C.Double, "( is ( is a ) )", "a"),
    (21, C.Double, "( nm ( nm A ) )", "A"),
    (22, C.Double, "( im ( im A ) )", "A"),
    (23, C.Double, "( tm ( tm A ) )", "A"),
    (24, C.Double, "( nv ( nv v ) )", "v"),
    (25, C.Commute, "( a +s b )", "( b +s a )"),
    (26, C.Commute, "( a *s b )", "( b *s a )"),
    (27, C.Commute, "( A +m B )", "( B +m A )"),
    (28, C.Commute, "( v +v w )", "( w +v v )"),
    (29, C.Commute, "( v *v a )", "( a *v v )"),
    (30, C.Commute, "( a *v v )", "( v *v a )"),
    (31, C.DistributeLeft, "( ( a +s b ) *s c )", "( ( a *s c ) +s ( b *s c ) )"),
    (32, C.DistributeLeft, "( ( a -s b ) *s c )", "( ( a *s c ) -s ( b *s c ) )"),
    (33, C.DistributeLeft, "( ( a +s b ) /s c )", "( ( a /s c ) +s ( b /s c ) )"),
    (34, C.DistributeLeft, "( ( a -s b ) /s c )", "( ( a /s c ) -s ( b /s c ) )"),
    (35, C.DistributeLeft, "( ( v +v w ) *v a )", "( ( v *v a ) +v ( w *v a ) )"),
    (36, C.DistributeLeft, "( ( v -v w ) *v a )", "( ( v *v a ) -v ( w *v a ) )"),
    (37, C.DistributeLeft, "( ( A +m B ) *m C )", "( ( A *m C ) +m ( B *m C ) )"),
    (38, C.DistributeLeft, "( ( A -m B ) *m C )", "( ( A *m C ) -m ( B *m C ) )"),
    (39, C.DistributeLeft, "( ( A +m B ) *v v )", "( ( A *v v ) +v ( B *v v ) )"),
    (40, C.DistributeLeft, "( ( A -m B ) *v v )", "( ( A *v v ) -v ( B *v v ) )"),
    (41, C.DistributeLeft, "( ( A +m B ) *m a )", "( ( A *m a ) +m ( B *m a ) )"),
    (42, C.DistributeLeft, "( ( A -m B ) *m a )", "( ( A *m a ) -m ( B *m a ) )"),
    (43, C.DistributeRight, "( a *s ( b +s c ) )", "( ( a *s b ) +s ( a *s c ) )"),
    (44, C.DistributeRight, "( a *s ( b -s c ) )", "( ( a *s b ) -s ( a *s c ) )"),
    (45, C.DistributeRight, "( a *v ( v +v w ) )", "( ( a *v v ) +v ( a *v w ) )"),
    (46, C.DistributeRight, "( a *v ( v -v w ) )", "( ( a *v v ) -v ( a *v w ) )"),
    (47, C.DistributeRight, "( A *m ( B +m C ) )", "( ( A *m B ) +m ( A *m C ) )"),
    (48, C.DistributeRight, "( A *m ( B -m C ) )", "( ( A *m B ) -m ( A *m C ) )"),
    (49, C.DistributeRight, "( a *m ( B +m C ) )", "( ( a *m B ) +m ( a *m C ) )"),
    (50, C.DistributeRight, "( a *m ( B -m C ) )", "( ( a *m B ) -m ( a *m C ) )"),
    (51, C.FactorLeft, "( ( a *s b ) +s ( a *s c ) )", "( a *s ( b +s c ) )"),
    (52, C.FactorLeft, "( ( a *s b ) -s ( a *s c ) )", "( a *s ( b -s c ) )"),
    (53, C.FactorLeft, "( ( A *m B ) +m ( A *m C ) )", "( A *m ( B +m C ) )"),
    (54, C.FactorLeft, "( ( A *m B ) -m ( A *m C ) )", "( A *m ( B -m C ) )"),
    (55, C.FactorLeft, "( ( A *v v ) +v ( A *v w ) )", "( A *v ( v +v w ) )"),
    (56, C.FactorLeft, "( ( A *v v ) -v ( A *v w ) )", "( A *v ( v -v w ) )"),
    (57, C.FactorLeft, "( ( A *m a ) +m ( A *m b ) )", "( A *m ( a +s b ) )"),
    (58, C.FactorLeft, "( ( A *m a ) -m ( A *m b ) )", "( A *m ( a -s b ) )"),
    (59, C.FactorLeft, "( ( v *v a ) +v ( v *v b ) )", "( v *v ( a +s b ) )"),
    (60, C.FactorLeft, "( ( v *v a ) -v ( v *v b ) )", "( v *v ( a -s b ) )"),
    (61, C.FactorRight, "( ( a *s c ) +s ( b *s c ) )", "( ( a +s b ) *s c )"),
    (62, C.FactorRight, "( ( a *s c ) -s ( b *s c ) )", "( ( a -s b ) *s c )"),
    (63, C.FactorRight, "( ( a /s c ) +s ( b /s c ) )", "( ( a +s b ) /s c )"),
    (64, C.FactorRight, "( ( a /s c ) -s ( b /s c ) )", "( ( a -s b ) /s c )"),
    (65, C.FactorRight, "( ( A *m C ) +m ( B *m C ) )", "( ( A +m B ) *m C )"),
    (66, C.FactorRight, "( ( A *m C ) -m ( B *m C ) )", "( ( A -m B ) *m C )"),
    (67, C.FactorRight, "( ( A *v v ) +v ( B *v v ) )", "( ( A +m B ) *v v )"),
    (68, C.FactorRight, "( ( A *v v ) -v ( B *v v ) )", "( ( A -m B ) *v v )"),
    (69, C.FactorRight, "( ( A *m a ) +m ( B *m a ) )", "( ( A +m B ) *m a )"),
    (70, C.FactorRight, "( ( A *m a ) -m ( B *m a ) )", "( ( A -m B ) *m a )"),
    (71, C.FactorRight, "( ( v *v a ) +v ( w *v a ) )", "( ( v +v w ) *v a )"),
    (72, C.FactorRight, "( ( v *v a ) -v ( w *v a ) )", "( ( v -v w ) *v a )"),
    (73, C.AssociativeLeft, "( a +s ( b +s c ) )", "( ( a +s b ) +s c )"),
    (74, C.AssociativeLeft, "( a *s ( b *s c ) )", "( ( a *s b ) *s c )"),
    (75, C.AssociativeLeft, "( A +m ( B +m C ) )", "( ( A +m B ) +m C )"),
    (76, C.AssociativeLeft, "( A *m ( B *m C ) )", "( ( A *m B ) *m C )"),
    (77, C.AssociativeLeft, "( A *m ( B *m a ) )", "( ( A *m B ) *m a )"),
    (78, C.AssociativeLeft, "( v +v ( w +v x ) )", "( ( v +v w ) +v x )"),
    (79, C.AssociativeRight, "( ( a +s b ) +s c )", "( a +s ( b +s c ) )"),
    (80, C.AssociativeRight, "( ( a *s b ) *s c )", "( a *s ( b *s c ) )"),
    (81, C.AssociativeRight, "( ( A +m B ) +m C )", "( A +m ( B +m C ) )"),
    (82, C.AssociativeRight, "( ( A *m B ) *m C )", "( A *m ( B *m C ) )"),
    (83, C.AssociativeRight, "( ( A *m B ) *m a )", "( A *m ( B *m a ) )"),
    (84, C.AssociativeRight, "( ( v +v w ) +v x )", "( v +v ( w +v x ) )"),
    (85, C.FlipLeft, "( ns ( a -s b ) )", "( b -s a )"),
    (86, C.FlipLeft, "( is ( a /s b ) )", "( b /s a )"),
    (87, C.FlipLeft, "( nm ( A -m B ) )", "( B -m A )"),
    (88, C.FlipLeft, "( nv ( v -v w ) )", "( w -v v )"),
    (89, C.FlipRight, "( a /s ( b /s c ) )", "( a *s ( c /s b ) )"),
    (90, C.FlipRight, "( a /s ( is b ) )", "( a *s b )"),
    (91, C.FlipRight, "( a -s ( b -s c ) )", "( a +s ( c -s b ) )"),
    (92, C.FlipRight, "( a -s ( ns b ) )", "( a +s b )"),
    (93, C.FlipRight, "( A -m ( B -m C ) )", "( A +m ( C -m B ) )"),
    (94, C.FlipRight, "( A -m ( nm B ) )", "( A +m B )"),
    (95, C.FlipRight, "( v -v ( w -v x ) )", "( v +v ( x -v w ) )"),
    (96, C.FlipRight, "( v -v ( nv w ) )", "( v +v w )"),
    (97, C.Transpose, "( A *m B )", "( tm ( ( tm B ) *m ( tm A ) ) )"),
    (98, C.Transpose, "( A +m B )", "( tm ( ( tm A ) +m ( tm B ) ) )"),
    (99, C.Transpose, "( A -m B )", "( tm ( ( tm A ) -m ( tm B ) ) )"),
    (100, C.Transpose, "( tm ( A *m B ) )", "( ( tm B ) *m ( tm A ) )"),
    (101, C.Transpose, "( tm ( A +m B ) )", "( ( tm A ) +m ( tm B ) )"),
    (102, C.Transpose, "( tm ( A -m B ) )", "( ( tm A ) -m ( tm B ) )"),
]
del C

# Both identity-element rules match when both operands are the constant;
# the left-constant variant yields to its right-constant twin.
_EXCLUDES = {6: (("a", "0"),), 9: (("a", "1"),), 12: (("A", "O"),), 15: (("A", "I"),), 17: (("v", "o"),)}


def _build_catalog() -> tuple[AxiomRule, ...]:
    rules = []
    for rid, cat, pat, tmpl in _TABLE:
        rule = AxiomRule(rid, cat, parse(pat), parse(tmpl), _EXCLUDES.get(rid, ()))
        if not _metavars(rule.template) <= _metavars(rule.pattern):
            raise AssertionError(f"rule {rid}: template introduces a metavariable")
        if rule.pattern.type is not rule.template.type:
            raise AssertionError(f"rule {rid}: template changes the result type")
        rules.append(rule)
    return tuple(rules)


_CATALOG = _build_catalog()
_BY_ID = {r.id: r for r in _CATALOG}
_BY_OP: dict[str, tuple[AxiomRule, ...]] = {}
for _r in _CATALOG:
    assert isinstance(_r.pattern, Node)
    _BY_OP.setdefault(_r.pattern.op.symbol, ())
    _BY_OP[_r.pattern.op.symbol] += (_r,)
_BY_OP_CAT: dict[tuple[str, Category], tuple[AxiomRule, ...]] = {}
for _r in _CATALOG:
    _key = (_r.pattern.op.symbol, _r.category)  # type: ignore[union-attr]
    _BY_OP_CAT[_key] = _BY_OP_CAT.get(_key, ()) + (_r,)
del _r, _key


def catalog() -> tuple[AxiomRule, ...]:
    """All 102 rules in id order (which is also category order)."""
    return _CATALOG


def rule(rule_id: int) -> AxiomRule:
    return _BY_ID[rule_id]


def catalog_table() -> list[dict[str, object]]:
    """Rows of (id, category, pattern, template) for export."""
    return [
        {"id": r.id, "category": r.category.value, "pattern": r.pattern.text, "template": r.template.text}
        for r in _CATALOG
    ]


def category_from_token(token: str) -> Category:
    return Category(token)


def rules_for(e: Expr) -> tuple[AxiomRule, ...]:
    """Candidate rules whose pattern root operator equals the root of ``e``."""
    if isinstance(e, Node):
        return _BY_OP.get(e.op.symbol, ())
    return ()


def match_node(e: Expr, cat: Category) -> tuple[AxiomRule, dict[str, Expr]] | None:
    if not isinstance(e, Node):
        return None
    found = None
    for r in _BY_OP_CAT.get((e.op.symbol, cat), ()):
        bindings = r.match(e)
        if bindings is not None:
            if found is not None:
                raise AssertionError(f"rules {found[0].id} and {r.id} both match {e.text}")
            found = (r, bindings)
    return found


def match_at(e: Expr, path: Path, cat: Category) -> tuple[int, dict[str, Expr]] | None:
    """Rule id and bindings for the single ``cat`` rule matching at ``path``.

    Returns None when no rule of the category applies.  Raises PathError if
    ``path`` does not resolve.
    """
    hit = match_node(subtree_at(e, path), cat)
    if hit is None:
        return None
    return hit[0].id, hit[1]


def apply_node(e: Expr, cat: Category) -> Expr | None:
    hit = match_node(e, cat)
    if hit is None:
        return None
    r, bindings = hit
    return r.instantiate(bindings)


def apply_at(e: Expr, path: Path, cat: Category) -> Expr:
    """Rewrite the subtree at ``path`` with the ``cat`` rule matching there."""
    sub = subtree_at(e, path)
    new = apply_node(sub, cat)
    if new is None:
        raise NotApplicable(f"no {cat.value} rule matches {sub.text}")
    return replace_at(e, path, new)


def applicable_node(e: Expr) -> list[Category]:
    cats: list[Category] = []
    for r in rules_for(e):
        if r.category not in cats and r.match(e) is not None:
            cats.append(r.category)
    cats.sort(key=_CATEGORY_INDEX.__getitem__)
    return cats


def applicable(e: Expr, path: Path = ()) -> list[Category]:
    """Categories with a matching rule at ``path``, in declaration order."""
    return applicable_node(subtree_at(e, path))


@functools.lru_cache(maxsize=1 << 16)
def _node_rewrites(e: Expr) -> tuple[tuple[Category, Expr], ...]:
    out = []
    for r in rules_for(e):
        bindings = r.match(e)
        if bindings is not None:
            out.append((r.category, r.instantiate(bindings)))
    # rules are stored in id order, which is category order
    return tuple(out)


def node_rewrites(e: Expr) -> tuple[tuple[Category, Expr], ...]:
    """Every (category, rewritten subtree) available at the root of ``e``."""
    return _node_rewrites(e)


def rewrites(e: Expr, path: Path = ()) -> Iterator[tuple[Path, Category, Expr]]:
    """All single-step rewrites of ``e`` as ``(path, category, new program)``.

    Ordered by path in pre-order, then category declaration order.
    """
    for cat, new in _node_rewrites(e):
        yield path, cat, new
    if isinstance(e, Node):
        for p, cat, new_left in rewrites(e.left, path + ("left",)):
            yield p, cat, Node(e.op, new_left, e.right)
        if e.right is not None:
            for p, cat, new_right in rewrites(e.right, path + ("right",)):
                yield p, cat, Node(e.op, e.left, new_right)
