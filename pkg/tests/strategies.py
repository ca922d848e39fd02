"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from indepkit.funcset import AttributeSet, FunctionSet
from indepkit.triples import Triple

NAMES = "xyzwuv"


@st.composite
def attr_sets(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    return AttributeSet(tuple(NAMES[:n]))


@st.composite
def function_sets(draw, min_n=1, max_n=5, alphabet=(0, 1), max_rows=12, min_rows=1):
    attrs = draw(attr_sets(min_n, max_n))
    row = st.tuples(*[st.sampled_from(alphabet)] * len(attrs))
    rows = draw(st.lists(row, min_size=min_rows, max_size=max_rows, unique=True))
    return FunctionSet(attrs, rows, alphabet)


@st.composite
def triples_over(draw, attrs: AttributeSet):
    parts = draw(st.lists(st.integers(0, 3), min_size=len(attrs), max_size=len(attrs)))
    masks = [0, 0, 0, 0]
    for i, p in enumerate(parts):
        masks[p] |= 1 << i
    return Triple(attrs, masks[1], masks[2], masks[3])
