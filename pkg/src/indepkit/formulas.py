"""Conjunctions of literals, DNFs and the disjoint family ``φ_i``.

Variables are natural numbers; ``p_j`` is variable ``j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PreconditionError, ResourceLimitError

ORACLE_MAX_VARS = 20


@dataclass(frozen=True)
class LiteralConjunction:
    positives: frozenset[int]
    negatives: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "positives", frozenset(self.positives))
        object.__setattr__(self, "negatives", frozenset(self.negatives))
        if any(v < 0 for v in self.positives | self.negatives):
            raise ValueError("variable indices are natural numbers")

    @classmethod
    def of(cls, pos: Iterable[int] = (), neg: Iterable[int] = ()) -> LiteralConjunction:
        return cls(frozenset(pos), frozenset(neg))

    @property
    def consistent(self) -> bool:
        return not self.positives & self.negatives

    @property
    def variables(self) -> frozenset[int]:
        return self.positives | self.negatives

    def __len__(self):
        return len(self.positives) + len(self.negatives)

    def __str__(self):
        lits = sorted([(v, "") for v in self.positives] + [(v, "¬") for v in self.negatives])
        return " ∧ ".join(f"{s}p{v}" for v, s in lits) or "⊤"


@dataclass(frozen=True)
class DNF:
    disjuncts: tuple[LiteralConjunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "disjuncts", tuple(self.disjuncts))

    @property
    def flagged(self) -> list[int]:
        """Positions of inconsistent disjuncts."""
        return [k for k, c in enumerate(self.disjuncts) if not c.consistent]

    @property
    def variables(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for c in self.disjuncts:
            out |= c.variables
        return out

    def __str__(self):
        return " ∨ ".join(f"({c})" for c in self.disjuncts) or "⊥"


def phi(i: int) -> LiteralConjunction:
    """``¬p_0 ∧ ... ∧ ¬p_{i-1} ∧ p_i``."""
    return LiteralConjunction(frozenset({i}), frozenset(range(i)))


def phi_family(k: int) -> list[LiteralConjunction]:
    if k < 1:
        raise ValueError("family size must be at least 1")
    return [phi(i) for i in range(k)]


def conj_disjoint(c1: LiteralConjunction, c2: LiteralConjunction) -> bool:
    """Syntactic test: some variable is positive in one and negative in the other."""
    if not c1.consistent or not c2.consistent:
        raise PreconditionError("disjointness is only decided for consistent conjunctions")
    return bool(c1.positives & c2.negatives or c1.negatives & c2.positives)


def consistent_disjunct(d: DNF) -> LiteralConjunction | None:
    return next((c for c in d.disjuncts if c.consistent), None)


# -- model enumeration oracle ------------------------------------------------------------


def _check_width(nvars: int):
    if nvars > ORACLE_MAX_VARS:
        raise ResourceLimitError(f"model enumeration over {nvars} variables")


def models(f: LiteralConjunction | DNF, nvars: int) -> set[int]:
    """Models over variables ``0..nvars-1`` as bitmasks (bit j = p_j true)."""
    _check_width(nvars)
    conj = f.disjuncts if isinstance(f, DNF) else (f,)
    out: set[int] = set()
    for c in conj:
        if max(c.variables, default=-1) >= nvars:
            raise PreconditionError("formula mentions a variable beyond the enumeration width")
        pos = sum(1 << v for v in c.positives)
        neg = sum(1 << v for v in c.negatives)
        out.update(m for m in range(1 << nvars) if m & pos == pos and not m & neg)
    return out


def disjoint_by_models(f: LiteralConjunction | DNF, g: LiteralConjunction | DNF, nvars: int) -> bool:
    return not models(f, nvars) & models(g, nvars)


def pairwise_disjoint(family: Sequence[LiteralConjunction]) -> bool:
    return all(conj_disjoint(a, b) for a, b in itertools.combinations(family, 2))


# -- length classes -----------------------------------------------------------------------


def conjunctions_of_length(m: int, i: int) -> list[LiteralConjunction]:
    """Every consistent conjunction of exactly ``i`` literals over ``m`` variables."""
    out = []
    for vs in itertools.combinations(range(m), i):
        for signs in itertools.product((True, False), repeat=i):
            out.append(LiteralConjunction.of([v for v, s in zip(vs, signs) if s], [v for v, s in zip(vs, signs) if not s]))
    return out


def max_disjoint_family(m: int, i: int) -> list[LiteralConjunction]:
    """A largest pairwise-disjoint family of length-``i`` conjunctions over ``m`` variables."""
    cands = conjunctions_of_length(m, i)
    n = len(cands)
    if n > 256:
        raise ResourceLimitError("exhaustive family search is limited to 256 candidates")
    adj = [0] * n  # bit j set: candidates disjoint (compatible in the family)
    for a, b in itertools.combinations(range(n), 2):
        if conj_disjoint(cands[a], cands[b]):
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    best: list[int] = []

    def grow(chosen: list[int], allowed: int):
        nonlocal best
        if len(chosen) + bin(allowed).count("1") <= len(best):
            return
        if not allowed:
            best = list(chosen)
            return
        v = allowed.bit_length() - 1
        grow(chosen + [v], allowed & adj[v])
        grow(chosen, allowed & ~(1 << v))

    grow([], (1 << n) - 1)
    return [cands[k] for k in sorted(best)]


def proof_bound(i: int) -> int:
    """Size bound the induction gives for a disjoint length-``i`` class:
    one formula plus ``i`` classes isomorphic to length ``i-1``."""
    if i < 1:
        raise ValueError("length must be positive")
    return 2 if i == 1 else 1 + i * proof_bound(i - 1)
