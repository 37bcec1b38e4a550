"""Rewrite sequences and their verification."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .axioms import CATEGORIES, Category, apply_at
from .errors import LexError, NotApplicable, ParseError, PathError
from .lang import SELECTORS, Expr, Path

NOT_EQUAL = "Not_equal"
_CATEGORY_TOKENS = {c.value: c for c in CATEGORIES}


@dataclass(frozen=True)
class RewriteStep:
    path: Path
    category: Category

    def tokens(self) -> list[str]:
        return [*self.path, self.category.value]


@dataclass(frozen=True)
class RewriteSequence:
    steps: tuple[RewriteStep, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def tokens(self) -> list[str]:
        return [tok for step in self.steps for tok in step.tokens()]

    def to_text(self) -> str:
        return " ".join(self.tokens())

    def __str__(self) -> str:
        return self.to_text()

    @property
    def token_count(self) -> int:
        return sum(len(s.path) + 1 for s in self.steps)

    def categories(self) -> set[Category]:
        return {s.category for s in self.steps}

    def __add__(self, other: "RewriteSequence") -> "RewriteSequence":
        return RewriteSequence(self.steps + other.steps)

    @classmethod
    def of(cls, steps: Iterable[tuple[Path, Category]]) -> "RewriteSequence":
        return cls(tuple(RewriteStep(tuple(p), c) for p, c in steps))


def parse_sequence(text: str) -> RewriteSequence:
    """Decode ``"DistributeRight right Commute"``-style token strings.

    Selectors accumulate until a category token closes the step.
    """
    steps = []
    pending: list[str] = []
    for tok in text.split():
        if tok in SELECTORS:
            pending.append(tok)
        elif tok in _CATEGORY_TOKENS:
            steps.append(RewriteStep(tuple(pending), _CATEGORY_TOKENS[tok]))
            pending = []
        elif tok == NOT_EQUAL:
            raise ParseError(f"{NOT_EQUAL} is an outcome marker, not a rewrite step")
        else:
            raise LexError(f"unknown sequence token {tok!r}")
    if pending:
        raise ParseError(f"selectors {' '.join(pending)!r} are not closed by a category")
    return RewriteSequence(tuple(steps))


@dataclass(frozen=True)
class Proven:
    final: Expr

    def __bool__(self) -> bool:
        return True

    def __str__(self) -> str:
        return "Proven"


@dataclass(frozen=True)
class StepFailed:
    index: int
    reason: str

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"StepFailed({self.index}): {self.reason}"


@dataclass(frozen=True)
class MismatchAfterRewrites:
    final: Expr

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"MismatchAfterRewrites: {self.final.text}"


Verdict = Union[Proven, StepFailed, MismatchAfterRewrites]


def check(a: Expr, seq: RewriteSequence, b: Expr) -> Verdict:
    """Apply ``seq`` to ``a`` step by step and compare the result with ``b``.

    Each step's path is read against the program as rewritten by the steps
    before it.  Failures come back as verdict values, never as exceptions.
    """
    prog = a
    for i, step in enumerate(seq.steps):
        try:
            prog = apply_at(prog, step.path, step.category)
        except (NotApplicable, PathError) as exc:
            return StepFailed(i, str(exc))
    if prog.text != b.text:
        return MismatchAfterRewrites(prog)
    return Proven(prog)


def replay(a: Expr, seq: RewriteSequence) -> Expr:
    """Apply every step of ``seq``; raises on the first illegal step."""
    for step in seq.steps:
        a = apply_at(a, step.path, step.category)
    return a
