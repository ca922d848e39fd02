"""Set independence over function sets and probabilistic independence over
exact rational measures.

Both predicates have a fast path (grouped counting through the ``_accel``
kernels) and a literal oracle (``*_naive``) that follows the definitions
member by member. Tests keep the two in lockstep.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import _accel
from .errors import DomainError, PreconditionError
from .funcset import Assignment, AttributeSet, Fragment, FunctionSet, LayeredFunctionSet, fragment
from .triples import DEFAULT_MAX_ATTRS, Triple, check_bound, decode_all

__all__ = [
    "set_indep",
    "set_indep_naive",
    "scan_table",
    "RationalMeasure",
    "uniform_measure",
    "marginal",
    "conditional",
    "prob_indep",
    "prob_indep_naive",
    "prob_scan_table",
]


def _check_attrs(attrs: AttributeSet, t: Triple):
    if t.attrs != attrs:
        raise DomainError("triple and function set use different attribute sets")


def _local_ids(rows: np.ndarray, attrs: AttributeSet, t: Triple) -> np.ndarray:
    """Fragment ids on every union of the three components.

    Row ``s`` of the result (``s`` in 0..7, bit 0 = X, bit 1 = Y, bit 2 = Z)
    identifies fragments on the corresponding union; ids are below ``len(rows)``.
    """
    m = len(rows)
    out = np.zeros((8, m), dtype=np.int64)
    parts = (t.x, t.y, t.z)
    n = len(attrs)
    for s in range(1, 8):
        mask = 0
        for b in range(3):
            if s >> b & 1:
                mask |= parts[b]
        cols = [i for i in range(n) if mask >> i & 1]
        if cols and m:
            _, inv = np.unique(rows[:, cols], axis=0, return_inverse=True)
            out[s] = inv.reshape(-1)
    return out


_ONE = np.array([1], dtype=np.int64)
_TWO = np.array([2], dtype=np.int64)
_FOUR = np.array([4], dtype=np.int64)


# -- set independence ------------------------------------------------------------


def set_indep(sigma: FunctionSet | LayeredFunctionSet, t: Triple) -> bool:
    """``<X|Y|Z>`` holds in ``sigma``.

    A layered set is checked layer by layer: a triple holds in the composed
    set iff it holds in every layer.
    """
    if isinstance(sigma, LayeredFunctionSet):
        return all(set_indep(layer, t) for layer in sigma.layers)
    _check_attrs(sigma.attrs, t)
    if t.trivial or len(sigma) <= 1:
        return True
    ids = _local_ids(sigma.rows, sigma.attrs, t)
    return bool(_accel.scan_set(ids, max(len(sigma), 1), _ONE, _TWO, _FOUR)[0])


def set_indep_naive(sigma: FunctionSet, t: Triple) -> bool:
    """Literal definition: every ``Y``-agreeing pair ``f, g`` can be pieced
    together by some ``h`` matching ``f`` on ``X ∪ Y`` and ``g`` on ``Z``."""
    _check_attrs(sigma.attrs, t)
    if t.trivial:
        return True
    n = len(sigma.attrs)
    cx = [i for i in range(n) if t.x >> i & 1]
    cy = [i for i in range(n) if t.y >> i & 1]
    cz = [i for i in range(n) if t.z >> i & 1]
    rows = [tuple(int(v) for v in r) for r in sigma.rows]
    pieces = {(tuple(r[i] for i in cx), tuple(r[i] for i in cy), tuple(r[i] for i in cz)) for r in rows}
    for f in rows:
        fy = tuple(f[i] for i in cy)
        fx = tuple(f[i] for i in cx)
        for g in rows:
            if tuple(g[i] for i in cy) != fy:
                continue
            if (fx, fy, tuple(g[i] for i in cz)) not in pieces:
                return False
    return True


def scan_table(sigma: FunctionSet | LayeredFunctionSet, max_attrs: int = DEFAULT_MAX_ATTRS) -> np.ndarray:
    """Dense verdict for all ``4**n`` triples (see ``triples.decode_all``)."""
    n = len(sigma.attrs)
    check_bound(n, max_attrs)
    if isinstance(sigma, LayeredFunctionSet):
        out = np.ones(4**n, dtype=bool)
        for layer in sigma.layers:
            out &= scan_table(layer, max_attrs)
        return out
    xm, ym, zm = decode_all(n)
    if len(sigma) <= 1:
        return np.ones(4**n, dtype=bool)
    ids, bound = sigma.id_table
    return _accel.scan_set(ids, bound, xm, ym, zm)


# -- measures --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RationalMeasure:
    """Exact probability weights on assignments.

    Only assignments with positive weight are stored (``support``); every
    other assignment has weight 0.
    """

    support: FunctionSet
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        w = tuple(Fraction(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != len(self.support):
            raise DomainError("one weight per support member required")
        if any(v <= 0 for v in w):
            raise DomainError("support weights must be positive")
        if sum(w, Fraction(0)) != 1:
            raise DomainError("weights must sum to exactly 1")

    @classmethod
    def from_mapping(cls, attrs: AttributeSet, weights: Mapping, alphabet=None) -> RationalMeasure:
        """Build from ``{assignment: weight}``; keys may be tuples, strings
        (compact rows) or :class:`Assignment`. Zero weights are dropped."""
        items = []
        for key, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise DomainError("weights must be nonnegative")
            if w == 0:
                continue
            if isinstance(key, Assignment):
                key = key.values
            elif isinstance(key, str):
                key = tuple(int(c) for c in key)
            items.append((tuple(int(v) for v in key), w))
        items.sort()
        keys = [k for k, _ in items]
        if len(set(keys)) != len(keys):
            raise DomainError("duplicate assignment in measure")
        support = FunctionSet(attrs, keys, alphabet)
        # FunctionSet sorts rows lexicographically, matching ``items``
        return cls(support, tuple(w for _, w in items))

    @property
    def attrs(self) -> AttributeSet:
        return self.support.attrs

    def weight(self, values) -> Fraction:
        if isinstance(values, Assignment):
            values = values.values
        key = np.asarray(values, dtype=np.int64)
        hit = np.flatnonzero((self.support.rows == key).all(axis=1)) if len(self.support) else []
        return self.weights[int(hit[0])] if len(hit) else Fraction(0)

    def integer_weights(self) -> tuple[list[int], int]:
        """Weights scaled to integers by the common denominator, and that denominator."""
        den = 1
        for w in self.weights:
            den = den * w.denominator // math.gcd(den, w.denominator)
        return [int(w * den) for w in self.weights], den

    @property
    def strictly_positive(self) -> bool:
        """Positive on every assignment over the declared alphabet."""
        return len(self.support) == len(self.support.alphabet) ** len(self.attrs)


def uniform_measure(a: FunctionSet) -> RationalMeasure:
    if len(a) == 0:
        raise PreconditionError("uniform measure of an empty function set")
    return RationalMeasure(a, (Fraction(1, len(a)),) * len(a))


def marginal(p: RationalMeasure, frag: Fragment | Mapping[str, int]) -> Fraction:
    """Total weight of the assignments extending ``frag``."""
    if not isinstance(frag, Fragment):
        frag = fragment(p.attrs, frag)
    if frag.attrs != p.attrs:
        raise DomainError("fragment over a different attribute set")
    cols = [i for i in range(len(p.attrs)) if frag.mask >> i & 1]
    if not cols:
        return Fraction(1)
    rows = p.support.rows
    if not len(rows):
        return Fraction(0)
    hit = (rows[:, cols] == np.asarray(frag.values)).all(axis=1)
    return sum((p.weights[i] for i in np.flatnonzero(hit)), Fraction(0))


def conditional(p: RationalMeasure, event: Mapping[str, int], given: Mapping[str, int]) -> Fraction:
    """``P(event | given)``; raises when ``P(given) = 0``."""
    clash = {k for k in event if k in given and event[k] != given[k]}
    den = marginal(p, given)
    if den == 0:
        raise PreconditionError(f"conditioning on a null event {dict(given)}")
    if clash:
        return Fraction(0)
    return marginal(p, {**given, **event}) / den


# -- probabilistic independence ------------------------------------------------------

_INT64_SAFE = 1 << 62


def prob_indep(p: RationalMeasure, t: Triple) -> bool:
    """``P(x,y,z)·P(y) = P(x,y)·P(y,z)`` for all fragments, in exact arithmetic.

    Checking only fragment combinations realised by support members is
    enough: summing the identity over them already exhausts ``P(y)``, so the
    unrealised combinations must have a zero right-hand side too.
    """
    _check_attrs(p.attrs, t)
    if t.trivial or len(p.support) <= 1:
        return True
    ints, total = p.integer_weights()
    ids = _local_ids(p.support.rows, p.attrs, t)
    if total * total < _INT64_SAFE:
        w = np.asarray(ints, dtype=np.int64)
        return bool(_accel.scan_prob(ids, len(p.support), w, _ONE, _TWO, _FOUR)[0])
    return _prob_check_bigint(ids, ints)


def _prob_check_bigint(ids: np.ndarray, ints: list[int]) -> bool:
    sums = {}
    for s in (2, 3, 6, 7):
        acc = {}
        for r, w in enumerate(ints):
            k = int(ids[s, r])
            acc[k] = acc.get(k, 0) + w
        sums[s] = acc
    for r in range(len(ints)):
        lhs = sums[7][int(ids[7, r])] * sums[2][int(ids[2, r])]
        rhs = sums[3][int(ids[3, r])] * sums[6][int(ids[6, r])]
        if lhs != rhs:
            return False
    return True


def prob_indep_naive(p: RationalMeasure, t: Triple) -> bool:
    """Enumerate every fragment combination over the alphabet."""
    _check_attrs(p.attrs, t)
    if t.trivial:
        return True
    names = p.attrs
    xs, ys, zs = (names.subset(m) for m in (t.x, t.y, t.z))
    k = p.support.alphabet

    def frags(group):
        for vals in itertools.product(k, repeat=len(group)):
            yield dict(zip(group, vals))

    for fy in frags(ys):
        py = marginal(p, fy)
        for fx in frags(xs):
            pxy = marginal(p, {**fx, **fy})
            for fz in frags(zs):
                if marginal(p, {**fx, **fy, **fz}) * py != pxy * marginal(p, {**fy, **fz}):
                    return False
    return True


def prob_scan_table(p: RationalMeasure, max_attrs: int = DEFAULT_MAX_ATTRS) -> np.ndarray:
    """Dense ``prob_indep`` verdicts for all ``4**n`` triples."""
    n = len(p.attrs)
    check_bound(n, max_attrs)
    xm, ym, zm = decode_all(n)
    if len(p.support) <= 1:
        return np.ones(4**n, dtype=bool)
    ints, total = p.integer_weights()
    if total * total >= _INT64_SAFE:
        return np.array(
            [prob_indep(p, Triple(p.attrs, int(a), int(b), int(c))) for a, b, c in zip(xm, ym, zm)], dtype=bool
        )
    ids, bound = p.support.id_table
    return _accel.scan_prob(ids, bound, np.asarray(ints, dtype=np.int64), xm, ym, zm)
