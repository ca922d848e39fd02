"""Text formats for function sets and triple families.

Function-set file::

    # comment
    attrs: x,a,b,c,d,z
    values: 0,1          (optional)
    111111
    0,1,1,1,1,0          (comma form, required for values above 9)

Triple file: one ``X | Y | Z`` per line, names separated by spaces or
commas, ``-`` for an empty part. An ``attrs:`` header is optional; without
one the attribute order is the order of first appearance.
"""

from __future__ import annotations

import re
from typing import Iterable

from .errors import DomainError, ParseError
from .funcset import AttributeSet, FunctionSet
from .triples import Triple


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _names(spec: str) -> list[str]:
    return [a for a in re.split(r"[,\s]+", spec.strip()) if a]


def parse_function_set(text: str) -> FunctionSet:
    attrs: AttributeSet | None = None
    alphabet: tuple[int, ...] | None = None
    rows: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    for no, line in _lines(text):
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if sep and key == "attrs":
            if attrs is not None:
                raise ParseError("second attrs header", no)
            try:
                attrs = AttributeSet(tuple(_names(rest)))
            except DomainError as exc:
                raise ParseError(str(exc), no) from None
            continue
        if sep and key == "values":
            if rows:
                raise ParseError("values must be declared before the rows", no)
            try:
                alphabet = tuple(int(v) for v in _names(rest))
            except ValueError:
                raise ParseError(f"bad values declaration {rest.strip()!r}", no) from None
            if not alphabet or any(v < 0 for v in alphabet):
                raise ParseError("values must be nonnegative integers", no)
            continue
        if attrs is None:
            raise ParseError("row before the attrs header", no)
        try:
            if "," in line or len(attrs) == 1:
                vals = tuple(int(v) for v in line.split(","))
            else:
                compact = line.replace(" ", "")
                if not compact.isdigit():
                    raise ValueError
                vals = tuple(int(c) for c in compact)
        except ValueError:
            raise ParseError(f"cannot read row {line!r}", no) from None
        if len(vals) != len(attrs):
            raise ParseError(f"row has {len(vals)} values, expected {len(attrs)}", no)
        if alphabet is not None and any(v not in alphabet for v in vals):
            raise ParseError(f"value outside declared values {alphabet}", no)
        if vals in seen:
            raise ParseError(f"duplicate row (first on line {seen[vals]})", no)
        seen[vals] = no
        rows.append(vals)
    if attrs is None:
        raise ParseError("missing attrs header")
    return FunctionSet(attrs, rows, alphabet)


def render_function_set(sigma: FunctionSet) -> str:
    out = ["attrs: " + ",".join(sigma.attrs.names), "values: " + ",".join(str(v) for v in sigma.alphabet)]
    compact = max(sigma.alphabet) <= 9
    for r in sigma.rows:
        out.append("".join(str(v) for v in r) if compact else ",".join(str(v) for v in r))
    return "\n".join(out) + "\n"


def _split_triple(text: str, lineno: int | None = None) -> list[list[str]]:
    parts = text.split("|")
    if len(parts) != 3:
        raise ParseError(f"expected 'X | Y | Z', got {text.strip()!r}", lineno)
    out = []
    for p in parts:
        names = [a for a in _names(p) if a != "-"]
        out.append(names)
    return out


def parse_triple(attrs: AttributeSet, text: str, lineno: int | None = None) -> Triple:
    x, y, z = _split_triple(text, lineno)
    try:
        return Triple(attrs, attrs.mask(x), attrs.mask(y), attrs.mask(z))
    except DomainError as exc:
        if "unknown attribute" in str(exc):
            raise ParseError(str(exc), lineno) from None
        raise


def render_triple(t: Triple) -> str:
    return str(t)


def parse_triples(text: str, attrs: AttributeSet | None = None) -> tuple[AttributeSet, list[Triple]]:
    """Triples from a family file; returns the attribute set used."""
    body: list[tuple[int, str]] = []
    for no, line in _lines(text):
        key, sep, rest = line.partition(":")
        if sep and key.strip().lower() == "attrs":
            if attrs is not None:
                raise ParseError("attrs given twice", no)
            attrs = AttributeSet(tuple(_names(rest)))
        else:
            body.append((no, line))
    if attrs is None:
        order: list[str] = []
        for no, line in body:
            for part in _split_triple(line, no):
                for a in part:
                    if a not in order:
                        order.append(a)
        if not order:
            raise ParseError("no attributes found")
        attrs = AttributeSet(tuple(order))
    return attrs, [parse_triple(attrs, line, no) for no, line in body]


def render_triples(attrs: AttributeSet, triples: Iterable[Triple]) -> str:
    out = ["attrs: " + ",".join(attrs.names)]
    out += [str(t) for t in triples]
    return "\n".join(out) + "\n"
