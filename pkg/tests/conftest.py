import pytest
from hypothesis import strategies as st

from eqrw.lang import SIGNATURES, Node, Terminal, TypeTag, parse, terminals_of

EXAMPLE_A = "( d *s ( ( ( ns e ) /s a ) -s c ) )"
EXAMPLE_B = "( ( d *s ( ( ns e ) /s a ) ) -s ( c *s d ) )"
EXAMPLE_SEQ = "DistributeRight right Commute"

_BY_RESULT = {tag: [] for tag in TypeTag}
for _sym, _sigs in SIGNATURES.items():
    for _sig in _sigs:
        _BY_RESULT[{"s": TypeTag.SCALAR, "m": TypeTag.MATRIX, "v": TypeTag.VECTOR}[_sym[1]]].append((_sym, _sig))


def programs(tag=TypeTag.SCALAR, depth=4):
    """Hypothesis strategy for well-typed programs of result type ``tag``."""
    leaf = st.sampled_from(terminals_of(tag)).map(Terminal)
    if depth == 0:
        return leaf

    def node(choice):
        sym, sig = choice
        kids = [programs(t, depth - 1) for t in sig]
        return st.tuples(*kids).map(lambda cs: Node(sym, *cs))

    return st.one_of(leaf, st.sampled_from(_BY_RESULT[tag]).flatmap(node))


any_program = st.sampled_from(list(TypeTag)).flatmap(programs)


@pytest.fixture
def example_pair():
    return parse(EXAMPLE_A), parse(EXAMPLE_B)
