"""Finite preferential structures, the minimal-element measure and rankedness.

Points are ``0..k-1`` internally; subsets are bitmasks. ``u ≺ v`` (an edge
``(u, v)``) reads "u is preferred to v". Transitivity is not assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import DomainError, PreconditionError


@dataclass(frozen=True)
class PreferenceStructure:
    universe: tuple[Hashable, ...]
    edges: frozenset[tuple[Hashable, Hashable]]

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "edges", frozenset(self.edges))
        if len(set(self.universe)) != len(self.universe):
            raise DomainError("duplicate points in universe")
        pts = set(self.universe)
        for u, v in self.edges:
            if u not in pts or v not in pts:
                raise DomainError(f"edge ({u!r}, {v!r}) leaves the universe")
            if u == v:
                raise DomainError("preference relation must be irreflexive")

    @classmethod
    def of(cls, universe: Iterable[Hashable], edges: Iterable[tuple[Hashable, Hashable]] = ()) -> PreferenceStructure:
        return cls(tuple(universe), frozenset(edges))

    @cached_property
    def _pos(self):
        return {p: i for i, p in enumerate(self.universe)}

    @cached_property
    def _below(self) -> tuple[int, ...]:
        """``_below[v]``: bitmask of points ``u`` with ``u ≺ v``."""
        out = [0] * len(self.universe)
        for u, v in self.edges:
            out[self._pos[v]] |= 1 << self._pos[u]
        return tuple(out)

    def mask(self, points: Iterable[Hashable]) -> int:
        m = 0
        for p in points:
            try:
                m |= 1 << self._pos[p]
            except KeyError:
                raise DomainError(f"unknown point {p!r}") from None
        return m

    def points(self, mask: int) -> frozenset:
        return frozenset(p for i, p in enumerate(self.universe) if mask >> i & 1)

    def prec(self, u, v) -> bool:
        return (u, v) in self.edges

    def mu_mask(self, a: int) -> int:
        out = 0
        below = self._below
        for i in range(len(self.universe)):
            if a >> i & 1 and not below[i] & a:
                out |= 1 << i
        return out


def mu_min(s: PreferenceStructure, a: Iterable[Hashable]) -> frozenset:
    """Elements of ``a`` with no element of ``a`` below them."""
    return s.points(s.mu_mask(s.mask(a)))


def f_measure(s: PreferenceStructure, a: Iterable[Hashable], b: Iterable[Hashable]) -> Fraction:
    """``|μ(A) ∩ B| / |μ(A)|``."""
    am, bm = s.mask(a), s.mask(b)
    if bm & ~am:
        raise DomainError("f_A(B) needs B ⊆ A")
    mu = s.mu_mask(am)
    if not mu:
        raise PreconditionError("μ(A) is empty")
    return Fraction(bin(mu & bm).count("1"), bin(mu).count("1"))


def _check_mu_precondition(s: PreferenceStructure):
    for a in range(1, 1 << len(s.universe)):
        if not s.mu_mask(a):
            raise PreconditionError(f"μ({set(s.points(a))}) is empty for a nonempty set")


def satisfies_mu_precondition(s: PreferenceStructure) -> bool:
    return all(s.mu_mask(a) for a in range(1, 1 << len(s.universe)))


def find_basic_violation(s: PreferenceStructure) -> tuple[frozenset, frozenset, frozenset] | None:
    """First chain ``(D, B, A)`` with ``D ⊆ B ⊆ A`` and ``B`` nonempty where
    ``f_A(D) ≠ f_A(B)·f_B(D)``, or ``None``."""
    _check_mu_precondition(s)
    pc = [bin(i).count("1") for i in range(1 << len(s.universe))]
    for a in range(1, 1 << len(s.universe)):
        mua = s.mu_mask(a)
        b = a
        while b:
            mub = s.mu_mask(b)
            nb, nab = pc[mub], pc[mua & b]
            d = b
            while True:
                # f_A(D) = f_A(B) f_B(D), cross-multiplied by |μA|·|μB|
                if pc[mua & d] * nb != nab * pc[mub & d]:
                    return s.points(d), s.points(b), s.points(a)
                if d == 0:
                    break
                d = (d - 1) & b
            b = (b - 1) & a
    return None


def check_basic(s: PreferenceStructure) -> bool:
    return find_basic_violation(s) is None


def find_rank_violation(s: PreferenceStructure) -> tuple | None:
    """Points ``(a, b, c)`` with ``a, b`` incomparable and ``b ≺ c, a ⊀ c`` or
    ``c ≺ b, c ⊀ a``."""
    u = s.universe
    for a, b in itertools.permutations(u, 2):
        if s.prec(a, b) or s.prec(b, a):
            continue
        for c in u:
            if c in (a, b):
                continue
            if (s.prec(b, c) and not s.prec(a, c)) or (s.prec(c, b) and not s.prec(c, a)):
                return a, b, c
    return None


def is_ranked(s: PreferenceStructure) -> bool:
    return find_rank_violation(s) is None


def all_irreflexive(universe: Sequence[Hashable]) -> Iterator[PreferenceStructure]:
    """Every irreflexive relation on ``universe``, in a fixed order."""
    pairs = list(itertools.permutations(universe, 2))
    for bits in range(1 << len(pairs)):
        yield PreferenceStructure(tuple(universe), frozenset(p for j, p in enumerate(pairs) if bits >> j & 1))
