"""Random program generation and equivalent / corrupted pair generation."""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .axioms import Category, applicable_node, match_node
from .checker import NOT_EQUAL, RewriteSequence, RewriteStep
from .errors import DegenerateInput
from .lang import (
    OPS,
    SIGNATURES,
    SPECIAL_TERMINALS,
    Expr,
    Node,
    Path,
    Terminal,
    TypeTag,
    replace_at,
    terminals_of,
    walk,
)

# binary operators appear twice so they are drawn more often than unary ones
DEFAULT_OPS: tuple[str, ...] = tuple(
    "+s -s *s /s +s -s *s /s is ns "
    "+m -m *m +m -m *m im nm tm "
    "+v -v *v +v -v *v nv".split()
)

_TERMINALS = {tag: [Terminal(s) for s in terminals_of(tag)] for tag in TypeTag}


@dataclass(frozen=True)
class GenConfig:
    initial_child_prob: float = 0.91
    level_decrement: float = 0.23
    apply_prob: float = 0.5
    rng_seed: int = 0
    op_weights: tuple[str, ...] = DEFAULT_OPS
    illegal_edits: int = 1
    # stop proposing rewrites past this many steps; only guards runaway chains
    step_cap: int = 64

    def __post_init__(self):
        if not self.op_weights:
            raise ValueError("op_weights must not be empty")
        for sym in self.op_weights:
            if sym not in OPS:
                raise ValueError(f"unknown operator {sym!r}")
        if self.level_decrement <= 0:
            raise ValueError("level_decrement must be positive")
        if self.illegal_edits < 1:
            raise ValueError("illegal_edits must be at least 1")

    @property
    def max_depth_edges(self) -> int:
        """Depth bound implied by the child probability schedule."""
        p, depth = self.initial_child_prob, 1
        while p > 0:
            p -= self.level_decrement
            depth += 1
        return depth

    def ops_producing(self, tag: TypeTag) -> list[str]:
        return [sym for sym in self.op_weights if OPS[sym].result_type is tag]


def sample_rng(seed: int, index: int) -> random.Random:
    """Independent stream for sample ``index``, so generation order never matters."""
    digest = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "little"))


def gen_src(
    cfg: GenConfig,
    rng: random.Random,
    ops: list[str] | tuple[str, ...] | None = None,
    p: float | None = None,
) -> Expr:
    """Random well-typed program rooted at an operator drawn from ``ops``.

    Every operand becomes an operator subtree with probability ``p`` and a
    random terminal of the required type otherwise; each level down the
    probability drops by ``cfg.level_decrement``.
    """
    if ops is None:
        ops = cfg.op_weights
    if p is None:
        p = cfg.initial_child_prob
    op = rng.choice(ops)
    sig = rng.choice(SIGNATURES[op])
    children = [_gen_operand(cfg, rng, tag, p) for tag in sig]
    return Node(op, *children)


def _gen_operand(cfg: GenConfig, rng: random.Random, tag: TypeTag, p: float) -> Expr:
    if rng.random() < p:
        ops = cfg.ops_producing(tag)
        if ops:
            return gen_src(cfg, rng, ops, p - cfg.level_decrement)
    return rng.choice(_TERMINALS[tag])


def gen_tgt(cfg: GenConfig, a: Expr, rng: random.Random) -> tuple[Expr, RewriteSequence]:
    """Rewrite ``a`` at random and record the steps that were taken.

    Nodes are visited in pre-order.  At each node every applicable category
    gets an independent ``apply_prob`` coin in declaration order and the
    first success fires.  The traversal then continues into the rewritten
    subtree, with paths recorded in post-rewrite coordinates so the sequence
    replays against the evolving program.
    """
    steps: list[RewriteStep] = []

    def visit(e: Expr, path: Path) -> Expr:
        if not isinstance(e, Node):
            return e
        if len(steps) < cfg.step_cap:
            for cat in applicable_node(e):
                if rng.random() < cfg.apply_prob:
                    hit = match_node(e, cat)
                    assert hit is not None
                    r, bindings = hit
                    new = r.instantiate(bindings)
                    steps.append(RewriteStep(path, cat))
                    tmpl = r.template
                    if isinstance(tmpl, Terminal):
                        if tmpl.text in SPECIAL_TERMINALS:
                            return new
                        # the node collapsed onto an operand we have not visited yet
                        return visit(new, path)
                    return descend(new, path)
        return descend(e, path)

    def descend(e: Expr, path: Path) -> Expr:
        if not isinstance(e, Node):
            return e
        left = visit(e.left, path + ("left",))
        if e.right is None:
            return Node(e.op, left)
        return Node(e.op, left, visit(e.right, path + ("right",)))

    b = visit(a, ())
    return b, RewriteSequence(tuple(steps))


_COMMUTE_ILLEGAL = {"-s", "-m", "-v", "/s"}
_MUTATIONS: dict[tuple[TypeTag, ...], tuple[str, ...]] = {
    (TypeTag.SCALAR, TypeTag.SCALAR): ("+s", "-s", "*s", "/s"),
    (TypeTag.MATRIX, TypeTag.MATRIX): ("+m", "-m", "*m"),
    (TypeTag.VECTOR, TypeTag.VECTOR): ("+v", "-v"),
    (TypeTag.SCALAR,): ("is", "ns"),
    (TypeTag.MATRIX,): ("im", "nm", "tm"),
}


def illegal_edits(e: Expr) -> list[tuple[Path, Expr]]:
    """Every single-node corruption of ``e`` as ``(path, replacement subtree)``.

    Two kinds: swapping the operands of an order-sensitive binary operator,
    and replacing an operator by a different one with the same signature.
    Results stay well-typed.
    """
    out: list[tuple[Path, Expr]] = []
    for path, node in walk(e):
        if not isinstance(node, Node):
            continue
        sym = node.op.symbol
        if node.right is not None:
            sig: tuple[TypeTag, ...] = (node.left.type, node.right.type)
            order_sensitive = sym in _COMMUTE_ILLEGAL or (sym == "*m" and sig == (TypeTag.MATRIX, TypeTag.MATRIX))
            if order_sensitive and node.left.text != node.right.text:
                out.append((path, Node(node.op, node.right, node.left)))
        else:
            sig = (node.left.type,)
        for other in _MUTATIONS.get(sig, ()):
            if other != sym:
                out.append((path, Node(other, *node.children)))
    return out


def gen_unequal(cfg: GenConfig, a: Expr, rng: random.Random, attempts: int = 8) -> tuple[Expr, str]:
    """Corrupt ``a`` with ``cfg.illegal_edits`` illegal edits, then rewrite legally.

    Returns the corrupted program and the ``Not_equal`` marker.  The edits are
    syntactic, so the result is usually (not always) semantically different.
    """
    if not illegal_edits(a):
        raise DegenerateInput(f"no illegal edit is possible on {a.text}")
    for _ in range(attempts):
        b = a
        for _ in range(cfg.illegal_edits):
            candidates = illegal_edits(b)
            if not candidates:
                break
            path, new = rng.choice(candidates)
            b = replace_at(b, path, new)
        b, _ = gen_tgt(cfg, b, rng)
        if b.text != a.text:
            return b, NOT_EQUAL
    raise DegenerateInput(f"corruptions of {a.text} kept reducing to the original")


@dataclass(frozen=True)
class SampleTuple:
    prog_a: Expr
    prog_b: Expr
    # a RewriteSequence, or the NOT_EQUAL marker string
    outcome: RewriteSequence | str = field(default=NOT_EQUAL)

    @property
    def is_equal(self) -> bool:
        return isinstance(self.outcome, RewriteSequence)

    @property
    def sequence(self) -> RewriteSequence | None:
        return self.outcome if isinstance(self.outcome, RewriteSequence) else None

    def outcome_text(self) -> str:
        return self.outcome.to_text() if isinstance(self.outcome, RewriteSequence) else NOT_EQUAL

    def key(self) -> tuple[str, str, str]:
        return (self.prog_a.text, self.prog_b.text, self.outcome_text())


def gen_sample(cfg: GenConfig, index: int, not_equal_frac: float = 0.0) -> SampleTuple:
    """One raw (unpruned) sample, fully determined by ``cfg.rng_seed`` and ``index``."""
    rng = sample_rng(cfg.rng_seed, index)
    a = gen_src(cfg, rng)
    if not_equal_frac > 0 and rng.random() < not_equal_frac:
        b, marker = gen_unequal(cfg, a, rng)
        return SampleTuple(a, b, marker)
    b, seq = gen_tgt(cfg, a, rng)
    return SampleTuple(a, b, seq)

