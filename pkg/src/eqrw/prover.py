"""Bounded breadth-first search for a rewrite sequence between two programs."""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass

from .axioms import rewrites
from .checker import RewriteSequence, RewriteStep, check
from .errors import BudgetExceeded, NotFoundWithinDepth, SignatureError
from .lang import Expr


@dataclass(frozen=True)
class SearchConfig:
    max_steps: int = 5
    # distinct programs the search may discover before giving up
    max_frontier: int = 200_000
    time_budget: float | None = None  # seconds
    dedup: bool = True

    def __post_init__(self):
        if self.max_steps < 0:
            raise ValueError("max_steps must be non-negative")
        if self.max_frontier < 1:
            raise ValueError("max_frontier must be positive")


class Status(enum.Enum):
    FOUND = "found"
    NOT_FOUND = "not found within depth"
    BUDGET = "budget exceeded"


@dataclass(frozen=True)
class SearchResult:
    status: Status
    sequence: RewriteSequence | None
    explored: int

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


def search(a: Expr, b: Expr, cfg: SearchConfig | None = None) -> SearchResult:
    """Breadth-first search from ``a`` for a program lexically equal to ``b``.

    Successors of a program are all single rule applications, ordered by
    path in pre-order and then by category, so the result is deterministic
    and of minimal length.  Every returned sequence has been re-verified.
    """
    cfg = cfg or SearchConfig()
    if a.type is not b.type:
        raise SignatureError(f"cannot relate a {a.type.value} program to a {b.type.value} program")
    if a.text == b.text:
        return SearchResult(Status.FOUND, RewriteSequence(), 1)
    deadline = None if cfg.time_budget is None else time.monotonic() + cfg.time_budget
    target = b.text
    seen = {a.text}
    layer: list[tuple[Expr, tuple[RewriteStep, ...]]] = [(a, ())]
    explored = 1
    for _ in range(cfg.max_steps):
        next_layer = []
        for prog, steps in layer:
            if deadline is not None and time.monotonic() > deadline:
                return SearchResult(Status.BUDGET, None, explored)
            for path, cat, new in rewrites(prog):
                text = new.text
                if cfg.dedup:
                    if text in seen:
                        continue
                    seen.add(text)
                explored += 1
                new_steps = steps + (RewriteStep(path, cat),)
                if text == target:
                    seq = RewriteSequence(new_steps)
                    if not check(a, seq, b):
                        raise AssertionError(f"search produced an invalid sequence {seq}")
                    return SearchResult(Status.FOUND, seq, explored)
                if explored >= cfg.max_frontier:
                    return SearchResult(Status.BUDGET, None, explored)
                next_layer.append((new, new_steps))
        if not next_layer:
            break
        layer = next_layer
    return SearchResult(Status.NOT_FOUND, None, explored)


def prove(a: Expr, b: Expr, cfg: SearchConfig | None = None) -> RewriteSequence:
    """Shortest rewrite sequence from ``a`` to ``b``.

    Raises NotFoundWithinDepth when every program within ``max_steps`` was
    explored without reaching ``b``, and BudgetExceeded when the state or
    time budget ran out first.  Neither means the programs differ.
    """
    res = search(a, b, cfg)
    if res.status is Status.FOUND:
        assert res.sequence is not None
        return res.sequence
    if res.status is Status.BUDGET:
        raise BudgetExceeded(f"budget exhausted after {res.explored} programs", res.explored)
    raise NotFoundWithinDepth(f"no proof within the step bound ({res.explored} programs explored)", res.explored)
