"""Attribute universes, assignments, function sets and their generators.

A :class:`FunctionSet` stores its members as the rows of an ``(m, n)``
integer matrix, one column per attribute in :class:`AttributeSet` order.
Attribute subsets are bitmasks over that order (bit ``i`` is attribute
``names[i]``).
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateConstructionWarning, DomainError, PreconditionError

BINARY = (0, 1)


@dataclass(frozen=True)
class AttributeSet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise DomainError("attribute set must be nonempty")
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate attribute names in {names}")

    @classmethod
    def of(cls, names: str | Iterable[str]) -> AttributeSet:
        """``AttributeSet.of("xyz")`` or ``AttributeSet.of(["b1", "b2"])``."""
        if isinstance(names, str):
            names = names.replace(",", " ").split() if (" " in names or "," in names) else list(names)
        return cls(tuple(names))

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    @cached_property
    def _pos(self):
        return {a: i for i, a in enumerate(self.names)}

    @property
    def full(self) -> int:
        return (1 << len(self.names)) - 1

    def index(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise DomainError(f"unknown attribute {name!r}") from None

    def mask(self, names: int | str | Iterable[str]) -> int:
        """Bitmask of a collection of attribute names (ints pass through)."""
        if isinstance(names, (int, np.integer)):
            m = int(names)
            if m < 0 or m & ~self.full:
                raise DomainError(f"mask {m:#x} outside attribute set")
            return m
        if isinstance(names, str):
            names = [names] if names in self._pos else list(names)
        m = 0
        for a in names:
            m |= 1 << self.index(a)
        return m

    def subset(self, mask: int) -> tuple[str, ...]:
        return tuple(a for i, a in enumerate(self.names) if mask >> i & 1)

    def render(self, mask: int, empty: str = "-") -> str:
        names = self.subset(mask)
        if not names:
            return empty
        return " ".join(names)


@dataclass(frozen=True)
class Assignment:
    attrs: AttributeSet
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) != len(self.attrs):
            raise DomainError("assignment must give one value per attribute")
        if any(v < 0 for v in self.values):
            raise DomainError("values must be nonnegative")

    def __getitem__(self, name: str) -> int:
        return self.values[self.attrs.index(name)]

    def __str__(self):
        return _render_values(self.values)


@dataclass(frozen=True)
class Fragment:
    """Values on a subset ``mask`` of attributes, in attribute order."""

    attrs: AttributeSet
    mask: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) != bin(self.mask).count("1"):
            raise DomainError("fragment values do not match its support")

    @property
    def support(self) -> tuple[str, ...]:
        return self.attrs.subset(self.mask)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.support, self.values))

    def restrict(self, names) -> Fragment:
        sub = self.attrs.mask(names)
        if sub & ~self.mask:
            raise DomainError("restriction outside fragment support")
        vals = [v for a, v in zip(self.support, self.values) if sub >> self.attrs.index(a) & 1]
        return Fragment(self.attrs, sub, tuple(vals))

    def __str__(self):
        return "".join(self.support) + "=" + _render_values(self.values)


def fragment(attrs: AttributeSet, values: Mapping[str, int]) -> Fragment:
    mask = attrs.mask(values.keys())
    return Fragment(attrs, mask, tuple(values[a] for a in attrs.subset(mask)))


def _render_values(values):
    if all(v < 10 for v in values):
        return "".join(str(v) for v in values)
    return ",".join(str(v) for v in values)


def _columns(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if mask >> i & 1]


class FunctionSet:
    """A finite set of total assignments ``I -> K``.

    Members are deduplicated and kept in lexicographic order, so two function
    sets with the same members compare equal and iterate identically.
    """

    def __init__(self, attrs: AttributeSet, rows, alphabet: Sequence[int] | None = None):
        if not isinstance(attrs, AttributeSet):
            attrs = AttributeSet.of(attrs)
        n = len(attrs)
        arr = np.asarray(rows, dtype=np.int64)
        if arr.size == 0:
            arr = np.zeros((0, n), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != n:
            raise DomainError(f"rows must have exactly {n} values")
        if (arr < 0).any():
            raise DomainError("values must be nonnegative")
        if len(arr):
            arr = np.unique(arr, axis=0)
        if alphabet is None:
            top = int(arr.max()) if arr.size else 1
            alphabet = tuple(range(max(top, 1) + 1))
        alphabet = tuple(sorted(set(int(v) for v in alphabet)))
        if arr.size and not np.isin(arr, alphabet).all():
            raise DomainError(f"value outside declared alphabet {alphabet}")
        arr.setflags(write=False)
        self.attrs = attrs
        self.alphabet = alphabet
        self.rows = arr

    @classmethod
    def from_strings(cls, attrs, rows: Iterable[str], alphabet=None) -> FunctionSet:
        """Build from compact rows such as ``["000", "111"]``."""
        if not isinstance(attrs, AttributeSet):
            attrs = AttributeSet.of(attrs)
        data = [[int(c) for c in r.replace(",", "")] if "," not in r else [int(c) for c in r.split(",")] for r in rows]
        return cls(attrs, data, alphabet)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        for r in self.rows:
            yield Assignment(self.attrs, tuple(r))

    @property
    def members(self) -> list[Assignment]:
        return list(self)

    def __contains__(self, item):
        if isinstance(item, Assignment):
            item = item.values
        key = np.asarray(item, dtype=np.int64)
        return bool(len(self.rows)) and bool((self.rows == key).all(axis=1).any())

    def __eq__(self, other):
        if not isinstance(other, FunctionSet):
            return NotImplemented
        return self.attrs == other.attrs and np.array_equal(self.rows, other.rows)

    def __hash__(self):
        return hash((self.attrs, self.rows.tobytes()))

    def __repr__(self):
        body = ", ".join(str(a) for a in list(self)[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"FunctionSet({''.join(self.attrs.names) if all(len(a) == 1 for a in self.attrs) else self.attrs.names}: {{{body}{more}}})"

    @property
    def is_binary(self) -> bool:
        return set(self.alphabet) <= set(BINARY)

    # -- fragment identifiers ------------------------------------------------

    def fragment_ids(self, mask: int) -> np.ndarray:
        """Dense integer id per member for its fragment on ``mask``."""
        cols = _columns(mask, len(self.attrs))
        if not cols or not len(self.rows):
            return np.zeros(len(self.rows), dtype=np.int64)
        _, inv = np.unique(self.rows[:, cols], axis=0, return_inverse=True)
        return inv.reshape(-1).astype(np.int64)

    @cached_property
    def id_table(self) -> tuple[np.ndarray, int]:
        """``(ids, bound)`` for every attribute subset; see ``_accel``."""
        n = len(self.attrs)
        m = len(self.rows)
        if self.is_binary and n <= 16 and (m << n) <= 1 << 26:
            packed = (self.rows << np.arange(n, dtype=np.int64)).sum(axis=1)
            masks = np.arange(1 << n, dtype=np.int64)
            ids = (masks[:, None] & packed[None, :]).astype(np.int64)
            return ids, 1 << n
        ids = np.zeros((1 << n, m), dtype=np.int64)
        bound = 1
        for s in range(1, 1 << n):
            low = s & -s
            prev = s ^ low
            col = self.rows[:, low.bit_length() - 1]
            key = ids[prev] * (int(col.max()) + 1 if m else 1) + col
            _, inv = np.unique(key, return_inverse=True)
            ids[s] = inv.reshape(-1)
            bound = max(bound, int(ids[s].max()) + 1 if m else 1)
        return ids, max(bound, 1)


# -- restriction and projection ----------------------------------------------


def restrict(f: Assignment, names) -> Fragment:
    mask = f.attrs.mask(names)
    return Fragment(f.attrs, mask, tuple(f.values[i] for i in _columns(mask, len(f.attrs))))


def project(sigma: FunctionSet, names) -> set[Fragment]:
    mask = sigma.attrs.mask(names)
    cols = _columns(mask, len(sigma.attrs))
    if not len(sigma):
        return set()
    if not cols:
        return {Fragment(sigma.attrs, 0, ())}
    uniq = np.unique(sigma.rows[:, cols], axis=0)
    return {Fragment(sigma.attrs, mask, tuple(r)) for r in uniq}


# -- layers --------------------------------------------------------------------


@dataclass(frozen=True)
class LayeredFunctionSet:
    layers: tuple[FunctionSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise PreconditionError("a layered function set needs at least one layer")
        attrs = self.layers[0].attrs
        if any(l.attrs != attrs for l in self.layers):
            raise DomainError("all layers must share one attribute set")

    @property
    def attrs(self) -> AttributeSet:
        return self.layers[0].attrs

    def __len__(self):
        return len(self.layers)

    def product_size(self) -> int:
        size = 1
        for layer in self.layers:
            size *= len(layer)
        return size


def compose_layers(layered: LayeredFunctionSet | Sequence[FunctionSet], max_members: int = 1 << 22) -> FunctionSet:
    """Materialise the attribute-wise tuple product of the layers.

    The tuple ``(f_1(i), ..., f_k(i))`` is encoded as its mixed-radix index
    over the layer alphabets, which is injective.
    """
    if not isinstance(layered, LayeredFunctionSet):
        layered = LayeredFunctionSet(tuple(layered))
    if any(len(l) == 0 for l in layered.layers):
        raise PreconditionError("cannot compose an empty layer")
    size = layered.product_size()
    if size > max_members:
        raise PreconditionError(f"composed set would have {size} members (limit {max_members})")
    n = len(layered.attrs)
    acc = np.zeros((1, n), dtype=np.int64)
    radix = 1
    for layer in layered.layers:
        k = max(layer.alphabet) + 1
        acc = (acc[:, None, :] * k + layer.rows[None, :, :]).reshape(-1, n)
        radix *= k
    return FunctionSet(layered.attrs, acc, alphabet=range(radix))


# -- named generators ------------------------------------------------------------


def all_assignments(attrs: AttributeSet, alphabet=BINARY) -> FunctionSet:
    rows = list(itertools.product(alphabet, repeat=len(attrs)))
    return FunctionSet(attrs, rows, alphabet)


def _binary_cube(n: int) -> np.ndarray:
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64).reshape(-1, n)


def parity_set(attrs: AttributeSet, names) -> FunctionSet:
    """All 0/1 assignments with an even number of zeros on ``names``."""
    mask = attrs.mask(names)
    if bin(mask).count("1") <= 1:
        raise PreconditionError("parity set needs at least two attributes")
    cube = _binary_cube(len(attrs))
    zeros = (cube[:, _columns(mask, len(attrs))] == 0).sum(axis=1)
    return FunctionSet(attrs, cube[zeros % 2 == 0], BINARY)


def constant_set(attrs: AttributeSet) -> FunctionSet:
    n = len(attrs)
    return FunctionSet(attrs, [[0] * n, [1] * n], BINARY)


def pair_set(attrs: AttributeSet, g: Assignment | Mapping[str, int] | Sequence[int]) -> FunctionSet:
    """``{0_c, g}``; a zero ``g`` yields the singleton ``{0_c}`` with a warning."""
    if isinstance(g, Assignment):
        if g.attrs != attrs:
            raise DomainError("assignment over a different attribute set")
        vals = g.values
    elif isinstance(g, Mapping):
        missing = set(attrs.names) - set(g)
        if missing:
            raise DomainError(f"assignment misses attributes {sorted(missing)}")
        vals = tuple(g[a] for a in attrs)
    else:
        vals = tuple(g)
    zero = (0,) * len(attrs)
    if tuple(vals) == zero:
        warnings.warn("pair_set with g = 0_c degenerates to {0_c}", DegenerateConstructionWarning, stacklevel=2)
    return FunctionSet(attrs, [zero, vals], BINARY)


def assignment_from(attrs: AttributeSet, default: int, **overrides: int) -> Assignment:
    """``assignment_from(I, 1, a=0)``: ``a=0`` and every other attribute 1."""
    vals = [default] * len(attrs)
    for name, v in overrides.items():
        vals[attrs.index(name)] = v
    return Assignment(attrs, tuple(vals))


def all_but(attrs: AttributeSet, forbidden: Fragment | Mapping[str, int]) -> FunctionSet:
    """All 0/1 assignments except those extending ``forbidden``."""
    if not isinstance(forbidden, Fragment):
        forbidden = fragment(attrs, forbidden)
    if forbidden.attrs != attrs:
        raise DomainError("fragment over a different attribute set")
    cube = _binary_cube(len(attrs))
    cols = _columns(forbidden.mask, len(attrs))
    if not cols:
        warnings.warn("all_but with empty support forbids everything", DegenerateConstructionWarning, stacklevel=2)
        return FunctionSet(attrs, np.zeros((0, len(attrs)), dtype=np.int64), BINARY)
    hit = (cube[:, cols] == np.asarray(forbidden.values)).all(axis=1)
    return FunctionSet(attrs, cube[~hit], BINARY)
