import pytest
from hypothesis import given
from strategies import function_sets

from indepkit.errors import DomainError, ParseError
from indepkit.fileformats import parse_function_set, parse_triple, parse_triples, render_function_set, render_triples
from indepkit.funcset import AttributeSet, FunctionSet
from indepkit.triples import Triple

CHANGE_REL = """# six rows
attrs: x,a,b,c,d,z
values: 0,1
111111
011110
011101
111100
110111
010000
"""


def test_basic():
    s = parse_function_set("attrs: x,y,z\n000\n111\n")
    assert s == FunctionSet.from_strings("xyz", ["000", "111"])
    assert s.attrs.names == ("x", "y", "z")


def test_change_rel():
    s = parse_function_set(CHANGE_REL)
    assert len(s) == 6 and s.attrs.names == tuple("xabcdz")


def test_comma_rows_and_comments():
    s = parse_function_set("attrs: p q\nvalues: 0,10,12\n0,10  # first\n12,0\n")
    assert s.rows.tolist() == [[0, 10], [12, 0]]
    assert parse_function_set("attrs: x\nvalues: 0,11\n11\n").rows.tolist() == [[11]]


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("attrs: x,y,z\nvalues: 0,1\n0,1,2\n", 3, "outside declared values"),
        ("attrs: x,y\n00\n011\n", 3, "expected 2"),
        ("attrs: x,y\n00\n\n00\n", 4, "first on line 2"),
        ("00\n", 1, "before the attrs header"),
        ("attrs: x\nattrs: y\n", 2, "second attrs"),
        ("attrs: x,y\n0a\n", 2, "cannot read"),
        ("attrs: x,y\n00\nvalues: 0,1\n", 3, "before the rows"),
    ],
)
def test_errors_carry_line(text, line, fragment):
    with pytest.raises(ParseError) as exc:
        parse_function_set(text)
    assert exc.value.line == line
    assert fragment in str(exc.value) and str(exc.value).startswith(f"line {line}:")


def test_missing_header():
    with pytest.raises(ParseError, match="missing attrs"):
        parse_function_set("# nothing\n")


@given(function_sets(max_n=5, alphabet=(0, 1, 2)))
def test_roundtrip_compact(sigma):
    assert parse_function_set(render_function_set(sigma)) == sigma


@given(function_sets(max_n=4, alphabet=(0, 7, 11, 30)))
def test_roundtrip_wide_alphabet(sigma):
    text = render_function_set(sigma)
    assert "," in text.splitlines()[-1] or len(sigma.attrs) == 1
    assert parse_function_set(text) == sigma


XABCZ = AttributeSet.of(["x", "a", "b", "c", "z"])


def test_parse_triple():
    assert parse_triple(XABCZ, "x | a b c | z") == Triple.of(XABCZ, "x", "abc", "z")
    assert parse_triple(XABCZ, "x | - | z") == Triple.of(XABCZ, "x", (), "z")
    assert parse_triple(XABCZ, "x,a | b | c z") == Triple.of(XABCZ, "xa", "b", "cz")


def test_parse_triple_errors():
    with pytest.raises(DomainError):
        parse_triple(XABCZ, "x | x | z")
    with pytest.raises(ParseError, match="unknown"):
        parse_triple(XABCZ, "x | q | z", 7)
    with pytest.raises(ParseError):
        parse_triple(XABCZ, "x | z")


def test_triple_family():
    attrs, ts = parse_triples("A | B | C\n# c\nA | C | D\n")
    assert attrs.names == ("A", "B", "C", "D") and len(ts) == 2
    attrs2, ts2 = parse_triples(render_triples(attrs, ts))
    assert attrs2 == attrs and ts2 == ts
    with pytest.raises(ParseError) as exc:
        parse_triples("attrs: A,B,C\nA | B | C\nA | Q | C\n")
    assert exc.value.line == 3
