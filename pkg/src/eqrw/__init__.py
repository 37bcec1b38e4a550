"""Typed linear-algebra programs, a directed rewrite-rule catalogue, and tools
to generate, verify and search for rewrite proofs between programs."""
from .axioms import (
    CATEGORIES,
    AxiomRule,
    Category,
    applicable,
    apply_at,
    catalog,
    catalog_table,
    match_at,
    rewrites,
    rule,
)
from .checker import (
    NOT_EQUAL,
    MismatchAfterRewrites,
    Proven,
    RewriteSequence,
    RewriteStep,
    StepFailed,
    check,
    parse_sequence,
    replay,
)
from .dataset import (
    REFERENCE_USAGE,
    DatasetStats,
    PruneRules,
    UsageBalancer,
    build,
    novelty,
    read,
    split,
    stats,
    write,
)
from .errors import (
    BudgetExceeded,
    DegenerateInput,
    EqrwError,
    ExhaustionError,
    FormatError,
    LexError,
    NotApplicable,
    NotFoundWithinDepth,
    NumericError,
    ParseError,
    PathError,
    SearchFailure,
    SignatureError,
)
from .generator import GenConfig, SampleTuple, gen_sample, gen_src, gen_tgt, gen_unequal, sample_rng
from .interp import Agreement, Valuation, evaluate, sample_valuation, semantically_equal
from .lang import Expr, Metrics, Node, Terminal, TypeTag, metrics, parse, subtree_at, to_text, walk
from .prover import SearchConfig, SearchResult, Status, prove, search

__version__ = "0.1.0"
