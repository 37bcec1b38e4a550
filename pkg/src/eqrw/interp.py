"""Numeric interpretation of programs, used as a semantic oracle."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NumericError, SignatureError
from .lang import Expr, Node, Terminal, TypeTag

RTOL = 1e-6
ATOL = 1e-9
MAX_SAMPLED_COND = 1e3
# computed denominators / matrices beyond these count as singular
_MIN_DIVISOR = 1e-9
_MAX_INVERT_COND = 1e9


@dataclass
class Valuation:
    """Concrete values for every terminal.

    The special terminals always carry their algebraic constants whatever
    the caller passes in.
    """

    dim: int = 3
    scalars: dict[str, float] = field(default_factory=dict)
    matrices: dict[str, np.ndarray] = field(default_factory=dict)
    vectors: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.scalars = {**self.scalars, "0": 0.0, "1": 1.0}
        self.matrices = {**self.matrices, "O": np.zeros((self.dim, self.dim)), "I": np.eye(self.dim)}
        self.vectors = {**self.vectors, "o": np.zeros(self.dim)}

    def lookup(self, t: Terminal):
        table = {TypeTag.SCALAR: self.scalars, TypeTag.MATRIX: self.matrices, TypeTag.VECTOR: self.vectors}[t.type]
        try:
            return table[t.text]
        except KeyError:
            raise KeyError(f"valuation has no binding for {t.text!r}") from None


def _entries(rng: np.random.Generator, shape) -> np.ndarray:
    mag = rng.uniform(0.1, 2.0, size=shape)
    sign = rng.choice((-1.0, 1.0), size=shape)
    return mag * sign


def sample_valuation(rng: np.random.Generator, dim: int = 3) -> Valuation:
    """Random valuation: entries uniform on [-2,-0.1] U [0.1,2], matrices with cond <= 1e3."""
    scalars = {s: float(_entries(rng, ())) for s in "abcde"}
    matrices = {}
    for s in "ABCDE":
        while True:
            m = _entries(rng, (dim, dim))
            if np.linalg.cond(m) <= MAX_SAMPLED_COND:
                break
        matrices[s] = m
    vectors = {s: _entries(rng, (dim,)) for s in "vwxyz"}
    return Valuation(dim, scalars, matrices, vectors)


def evaluate(e: Expr, val: Valuation):
    """Value of ``e``: a float, a (dim, dim) array or a (dim,) array."""
    if isinstance(e, Terminal):
        return val.lookup(e)
    assert isinstance(e, Node)
    sym = e.op.symbol
    x = evaluate(e.left, val)
    if e.right is None:
        if sym in ("ns", "nm", "nv"):
            return -x
        if sym == "is":
            if abs(x) < _MIN_DIVISOR:
                raise NumericError("reciprocal of zero")
            return 1.0 / x
        if sym == "tm":
            return x.T
        if sym == "im":
            if not np.isfinite(x).all() or np.linalg.cond(x) > _MAX_INVERT_COND:
                raise NumericError("inverse of a singular matrix")
            return np.linalg.inv(x)
        raise AssertionError(sym)
    y = evaluate(e.right, val)
    if sym in ("+s", "+m", "+v"):
        return x + y
    if sym in ("-s", "-m", "-v"):
        return x - y
    if sym == "/s":
        if abs(y) < _MIN_DIVISOR:
            raise NumericError("division by zero")
        return x / y
    if sym == "*s":
        return x * y
    # *m and *v: matrix product when both sides are arrays, else scaling
    if np.ndim(x) and np.ndim(y):
        return x @ y
    return x * y


def close(x, y, rtol: float = RTOL, atol: float = ATOL) -> bool:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        return False
    tol = np.maximum(rtol * np.maximum(np.abs(x), np.abs(y)), atol)
    return bool(np.all(np.abs(x - y) <= tol))


class Agreement(NamedTuple):
    agree_count: int
    disagree_count: int
    skip_count: int


def semantically_equal(
    a: Expr,
    b: Expr,
    trials: int = 100,
    rng: np.random.Generator | int | None = None,
    dim: int = 3,
) -> Agreement:
    """Compare ``a`` and ``b`` on ``trials`` random valuations.

    Trials where either side hits a NumericError are skipped.  Agreement is
    evidence of equivalence, not proof.
    """
    if a.type is not b.type:
        raise SignatureError(f"cannot compare a {a.type.value} with a {b.type.value}")
    rng = np.random.default_rng(rng)
    agree = disagree = skip = 0
    for _ in range(trials):
        val = sample_valuation(rng, dim)
        try:
            with np.errstate(all="raise"):
                x = evaluate(a, val)
                y = evaluate(b, val)
        except (NumericError, FloatingPointError, np.linalg.LinAlgError):
            skip += 1
            continue
        if close(x, y):
            agree += 1
        else:
            disagree += 1
    return Agreement(agree, disagree, skip)
