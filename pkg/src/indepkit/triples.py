"""Triples ``<X|Y|Z>`` and sets of triples.

A triple over ``n`` attributes has a dense index in ``range(4**n)``: base-4
digit ``i`` says where attribute ``i`` sits (0 outside, 1 in X, 2 in Y,
3 in Z). Dense boolean tables over that index are the common currency of the
scan and rule-checking code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError, ResourceLimitError
from .funcset import AttributeSet

DEFAULT_MAX_ATTRS = 12


@dataclass(frozen=True)
class Triple:
    attrs: AttributeSet
    x: int
    y: int
    z: int

    def __post_init__(self):
        for m in (self.x, self.y, self.z):
            if m < 0 or m & ~self.attrs.full:
                raise DomainError("triple component outside attribute set")
        if self.x & self.y or self.x & self.z or self.y & self.z:
            raise DomainError("triple components must be pairwise disjoint")

    @classmethod
    def of(cls, attrs: AttributeSet, x, y, z) -> Triple:
        """``Triple.of(I, "x", "abc", "z")``; components accept names or masks."""
        return cls(attrs, _as_mask(attrs, x), _as_mask(attrs, y), _as_mask(attrs, z))

    @property
    def trivial(self) -> bool:
        return self.x == 0 or self.z == 0

    @property
    def union(self) -> int:
        return self.x | self.y | self.z

    def swap(self) -> Triple:
        return Triple(self.attrs, self.z, self.y, self.x)

    def canonical(self) -> Triple:
        return self if self.x <= self.z else self.swap()

    @property
    def index(self) -> int:
        s = spread4(len(self.attrs))
        return int(s[self.x] + 2 * s[self.y] + 3 * s[self.z])

    def names(self) -> tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]:
        a = self.attrs
        return a.subset(self.x), a.subset(self.y), a.subset(self.z)

    def __str__(self):
        a = self.attrs
        return f"{a.render(self.x)} | {a.render(self.y)} | {a.render(self.z)}"

    def compact(self) -> str:
        """Short form: ``x(abc)z``, ``ABC``, ``x(y)(zw)``. Multi-attribute
        parts are parenthesised, and so is the middle next to such a part."""

        def part(mask, force=False):
            names = self.attrs.subset(mask)
            if not names:
                return "()"
            body = "".join(names) if all(len(n) == 1 for n in names) else ",".join(names)
            return body if len(names) == 1 and not force else f"({body})"

        wide = bin(self.x).count("1") > 1 or bin(self.z).count("1") > 1
        return part(self.x) + part(self.y, wide) + part(self.z)

    def __repr__(self):
        return f"Triple<{self}>"


def _as_mask(attrs: AttributeSet, part) -> int:
    if part is None:
        return 0
    if isinstance(part, (int, np.integer)):
        return attrs.mask(int(part))
    if isinstance(part, str) and part in ("", "-"):
        return 0
    return attrs.mask(part)


# -- dense indexing ------------------------------------------------------------


@lru_cache(maxsize=None)
def spread4(n: int) -> np.ndarray:
    """``spread4(n)[mask] == sum(4**i for i in mask)``."""
    masks = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        out += ((masks >> i) & 1) << (2 * i)
    out.setflags(write=False)
    return out


def check_bound(n: int, max_attrs: int = DEFAULT_MAX_ATTRS):
    if n > max_attrs:
        raise ResourceLimitError(f"{n} attributes exceed the enumeration bound {max_attrs} (4**n triples)")


@lru_cache(maxsize=16)
def decode_all(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Masks ``(X, Y, Z)`` for every dense triple index over ``n`` attributes."""
    idx = np.arange(4**n, dtype=np.int64)
    xm = np.zeros_like(idx)
    ym = np.zeros_like(idx)
    zm = np.zeros_like(idx)
    for i in range(n):
        d = (idx >> (2 * i)) & 3
        bit = np.int64(1 << i)
        xm |= np.where(d == 1, bit, 0)
        ym |= np.where(d == 2, bit, 0)
        zm |= np.where(d == 3, bit, 0)
    for a in (xm, ym, zm):
        a.setflags(write=False)
    return xm, ym, zm


def index_of(n: int, x, y, z):
    """Vectorised dense index of masks ``x, y, z`` (ints or arrays)."""
    s = spread4(n)
    return s[x] + 2 * s[y] + 3 * s[z]


@lru_cache(maxsize=16)
def swap_index(n: int) -> np.ndarray:
    xm, ym, zm = decode_all(n)
    out = index_of(n, zm, ym, xm)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=16)
def trivial_mask(n: int) -> np.ndarray:
    xm, _, zm = decode_all(n)
    out = (xm == 0) | (zm == 0)
    out.setflags(write=False)
    return out


def iter_triples(attrs: AttributeSet, include_trivial: bool = True) -> Iterator[Triple]:
    n = len(attrs)
    xm, ym, zm = decode_all(n)
    for t in range(4**n):
        if include_trivial or (xm[t] and zm[t]):
            yield Triple(attrs, int(xm[t]), int(ym[t]), int(zm[t]))


# -- triple sets -------------------------------------------------------------------


class TripleSet:
    """A symmetric ternary relation over one attribute set.

    Only nontrivial triples are stored, each in canonical orientation
    (``x <= z``). Membership applies symmetry, and trivial triples (empty X or
    Z) are always members.
    """

    def __init__(self, attrs: AttributeSet, triples: Iterable[Triple | tuple[int, int, int]] = ()):
        self.attrs = attrs
        keys = set()
        for t in triples:
            if isinstance(t, Triple):
                if t.attrs != attrs:
                    raise DomainError("triple over a different attribute set")
                x, y, z = t.x, t.y, t.z
            else:
                x, y, z = (int(v) for v in t)
                Triple(attrs, x, y, z)  # validates
            if x == 0 or z == 0:
                continue
            keys.add((x, y, z) if x <= z else (z, y, x))
        self._keys = frozenset(keys)

    @classmethod
    def from_table(cls, attrs: AttributeSet, table: np.ndarray) -> TripleSet:
        n = len(attrs)
        table = np.asarray(table, dtype=bool)
        if table.shape != (4**n,):
            raise DomainError("table size does not match attribute count")
        xm, ym, zm = decode_all(n)
        sel = np.flatnonzero(table & (xm != 0) & (zm != 0) & (xm <= zm))
        out = cls(attrs)
        out._keys = frozenset((int(xm[t]), int(ym[t]), int(zm[t])) for t in sel)
        return out

    def table(self) -> np.ndarray:
        """Dense boolean membership over all ``4**n`` triples."""
        n = len(self.attrs)
        out = trivial_mask(n).copy()
        if self._keys:
            k = np.array(sorted(self._keys), dtype=np.int64)
            out[index_of(n, k[:, 0], k[:, 1], k[:, 2])] = True
            out[index_of(n, k[:, 2], k[:, 1], k[:, 0])] = True
        return out

    def __contains__(self, t: Triple) -> bool:
        if t.x == 0 or t.z == 0:
            return True
        key = (t.x, t.y, t.z) if t.x <= t.z else (t.z, t.y, t.x)
        return key in self._keys

    def __len__(self):
        """Number of stored (nontrivial, canonical) triples."""
        return len(self._keys)

    def __iter__(self) -> Iterator[Triple]:
        for x, y, z in sorted(self._keys, key=lambda k: (bin(k[0] | k[1] | k[2]).count("1"), k[1], k[0], k[2])):
            yield Triple(self.attrs, x, y, z)

    def __eq__(self, other):
        if not isinstance(other, TripleSet):
            return NotImplemented
        return self.attrs == other.attrs and self._keys == other._keys

    def __hash__(self):
        return hash((self.attrs, self._keys))

    def __or__(self, other: TripleSet) -> TripleSet:
        out = TripleSet(self.attrs)
        out._keys = self._keys | other._keys
        return out

    def __sub__(self, other: TripleSet) -> TripleSet:
        out = TripleSet(self.attrs)
        out._keys = self._keys - other._keys
        return out

    def __and__(self, other: TripleSet) -> TripleSet:
        out = TripleSet(self.attrs)
        out._keys = self._keys & other._keys
        return out

    def keys(self) -> frozenset:
        return self._keys

    def __repr__(self):
        body = ", ".join(t.compact() for t in list(self)[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"TripleSet({len(self)}: {body}{more})"


def full_tripleset(attrs: AttributeSet) -> TripleSet:
    n = len(attrs)
    return TripleSet.from_table(attrs, np.ones(4**n, dtype=bool))


def subsets_of(mask: int, proper: bool = False) -> Iterator[int]:
    """All submasks of ``mask`` (descending), optionally excluding ``mask``."""
    sub = mask
    while True:
        if not (proper and sub == mask):
            yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def three_way_splits(mask: int) -> Iterator[tuple[int, int, int]]:
    """Every ordered partition of ``mask`` into three (possibly empty) parts."""
    bits = [1 << i for i in range(mask.bit_length()) if mask >> i & 1]
    for choice in itertools.product(range(3), repeat=len(bits)):
        parts = [0, 0, 0]
        for b, c in zip(bits, choice):
            parts[c] |= b
        yield parts[0], parts[1], parts[2]
