"""Coding partial orders by set labels and by multiset labels ``a^n B'``.

A multiset label is a pair ``(exp, base)``: ``exp`` copies of the
distinguished atom ``a`` plus a plain subset ``base`` of the base atoms.
Labels are ordered by multiset inclusion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import DomainError, ResourceLimitError


@dataclass(frozen=True, order=True)
class MultisetLabel:
    exp: int
    base: frozenset
    atoms: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base", frozenset(self.base))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if self.exp < 0:
            raise DomainError("exponent must be nonnegative")
        if self.atoms and not self.base <= set(self.atoms):
            raise DomainError(f"base {set(self.base)} outside alphabet {self.atoms}")

    def __str__(self):
        base = "".join(a for a in self.atoms if a in self.base) if self.atoms else "".join(sorted(self.base))
        if self.exp == 0:
            return base or "∅"
        head = "a" if self.exp == 1 else f"a^{self.exp}"
        return head + (" " + base if base else "")

    def union(self, other: MultisetLabel) -> MultisetLabel:
        _same_alphabet(self, other)
        return MultisetLabel(max(self.exp, other.exp), self.base | other.base, self.atoms)


def _same_alphabet(l1: MultisetLabel, l2: MultisetLabel):
    if l1.atoms and l2.atoms and l1.atoms != l2.atoms:
        raise DomainError("labels over different base alphabets")


def label_leq(l1: MultisetLabel, l2: MultisetLabel) -> bool:
    _same_alphabet(l1, l2)
    return l1.exp <= l2.exp and l1.base <= l2.base


@dataclass(frozen=True)
class LabeledNode:
    id: Hashable
    label: MultisetLabel


@dataclass(frozen=True)
class IntendedOrder:
    """A strict partial order given by generating edges ``(u, v)``: u below v."""

    nodes: tuple
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        if len(set(self.nodes)) != len(self.nodes):
            raise DomainError("duplicate node ids")
        known = set(self.nodes)
        for u, v in self.edges:
            if u not in known or v not in known:
                raise DomainError(f"edge ({u!r}, {v!r}) uses an unknown node")
        if any((u, u) in self.closure for u in self.nodes):
            raise DomainError("order has a cycle")

    @cached_property
    def closure(self) -> frozenset:
        below = {u: set() for u in self.nodes}  # below[v] = nodes strictly below v
        for u, v in self.edges:
            below[v].add(u)
        changed = True
        while changed:
            changed = False
            for v in self.nodes:
                extra = set()
                for u in below[v]:
                    extra |= below[u]
                if not extra <= below[v]:
                    below[v] |= extra
                    changed = True
        return frozenset((u, v) for v in self.nodes for u in below[v])

    def less(self, u, v) -> bool:
        return (u, v) in self.closure

    def comparable(self, u, v) -> bool:
        return self.less(u, v) or self.less(v, u)

    def same_as(self, other: IntendedOrder) -> bool:
        return set(self.nodes) == set(other.nodes) and self.closure == other.closure

    def extra_edges(self, other: IntendedOrder) -> frozenset:
        """Strict pairs of ``self`` missing from ``other``."""
        return self.closure - other.closure


def induced_order(nodes: Sequence[LabeledNode]) -> IntendedOrder:
    labels = [n.label for n in nodes]
    if len(set(labels)) != len(labels):
        raise DomainError("two distinct nodes carry the same label")
    edges = [(u.id, v.id) for u, v in itertools.permutations(nodes, 2) if label_leq(u.label, v.label)]
    return IntendedOrder(tuple(n.id for n in nodes), frozenset(edges))


# -- antichains and the pyramid ------------------------------------------------------------


def base_atoms(n: int) -> tuple[str, ...]:
    """``b, c, d, ...`` for small ``n`` (``b`` is bit 0), ``b0, b1, ...`` beyond."""
    letters = "bcdefghijklmnopqrstuvwxyz"
    return tuple(letters[:n]) if n <= len(letters) else tuple(f"b{i}" for i in range(n))


def subset_by_code(atoms: Sequence[str], code: int) -> frozenset:
    return frozenset(a for i, a in enumerate(atoms) if code >> i & 1)


def exponent(n: int, code: int) -> int:
    """Order-reversing exponent ``2**n - 1 - code``."""
    return (1 << n) - 1 - code


def encode_antichain(n: int, atoms: Sequence[str] | None = None) -> list[MultisetLabel]:
    """``a^{e(B')} B'`` for every ``B'``, in binary-code order of ``B'``."""
    if n < 1:
        raise DomainError("antichain exponent n must be at least 1")
    atoms = tuple(atoms) if atoms else base_atoms(n)
    if len(atoms) != n:
        raise DomainError("need exactly n base atoms")
    return [MultisetLabel(exponent(n, c), subset_by_code(atoms, c), atoms) for c in range(1 << n)]


@dataclass(frozen=True)
class Pyramid:
    n: int
    nodes: tuple[LabeledNode, ...]
    intended: IntendedOrder

    def level(self, k: int) -> list[LabeledNode]:
        return [nd for nd in self.nodes if nd.id[0] == k]

    def node(self, k: int, i: int) -> LabeledNode:
        return next(nd for nd in self.nodes if nd.id == (k, i))


def build_pyramid(n: int) -> Pyramid:
    """Levels ``0..n-1``; node ``(k, i)`` sits above ``(k-1, 2i)`` and ``(k-1, 2i+1)``
    and is labelled by the union of their labels."""
    if n < 2:
        raise DomainError("pyramid needs n >= 2")
    nodes = {(0, i): lab for i, lab in enumerate(encode_antichain(n))}
    edges = []
    for k in range(1, n):
        for i in range(1 << (n - k)):
            lo, hi = (k - 1, 2 * i), (k - 1, 2 * i + 1)
            nodes[(k, i)] = nodes[lo].union(nodes[hi])
            edges += [(lo, (k, i)), (hi, (k, i))]
    labeled = tuple(LabeledNode(nid, lab) for nid, lab in nodes.items())
    return Pyramid(n, labeled, IntendedOrder(tuple(nodes), frozenset(edges)))


@dataclass(frozen=True)
class ExtensionAttempt:
    label: MultisetLabel
    above: tuple  # intended lower covers
    consistent: bool
    spurious: tuple  # (node id, label) strictly below the new node without being intended


@dataclass(frozen=True)
class ExtensionReport:
    first: ExtensionAttempt
    second: ExtensionAttempt
    alternatives: tuple[MultisetLabel, ...]  # labels for the second node that would be consistent
    searched: int  # labels tried by the exhaustive search

    @property
    def failure_confirmed(self) -> bool:
        return self.first.consistent and not self.second.consistent and not self.alternatives


def _try_extension(nodes: list[LabeledNode], intended: IntendedOrder, new_id, label, above) -> ExtensionAttempt:
    edges = set(intended.edges) | {(u, new_id) for u in above}
    want = IntendedOrder(intended.nodes + (new_id,), frozenset(edges))
    lab_by_id = {nd.id: nd.label for nd in nodes}
    if label in lab_by_id.values():
        return ExtensionAttempt(label, tuple(above), False, ())
    got = induced_order(nodes + [LabeledNode(new_id, label)])
    extra = got.extra_edges(want)
    spurious = tuple(sorted(((u, lab_by_id[u]) for u, v in extra if v == new_id), key=lambda p: str(p[0])))
    ok = not extra and not want.extra_edges(got)
    return ExtensionAttempt(label, tuple(above), ok, spurious)


def check_extension_failure(n: int) -> ExtensionReport:
    """Add a node above ``(n-2, 0), (n-2, 2)``, then try one above
    ``(n-2, 1), (n-2, 3)`` and search every label for the latter."""
    if n < 3:
        raise DomainError("extension argument needs n >= 3")
    pyr = build_pyramid(n)
    nodes = list(pyr.nodes)
    lvl = n - 2
    a0, a2 = pyr.node(lvl, 0), pyr.node(lvl, 2)
    first = _try_extension(nodes, pyr.intended, "new1", a0.label.union(a2.label), (a0.id, a2.id))
    if not first.consistent:
        second = _try_extension(nodes, pyr.intended, "new2", pyr.node(lvl, 1).label, ())
        return ExtensionReport(first, second, (), 0)
    nodes1 = nodes + [LabeledNode("new1", first.label)]
    order1 = IntendedOrder(pyr.intended.nodes + ("new1",), pyr.intended.edges | {(a0.id, "new1"), (a2.id, "new1")})
    a1, a3 = pyr.node(lvl, 1), pyr.node(lvl, 3)
    natural = a1.label.union(a3.label)
    second = _try_extension(nodes1, order1, "new2", natural, (a1.id, a3.id))
    atoms = natural.atoms
    free = [x for x in atoms if x not in natural.base]
    alts = []
    tried = 0
    for e in range(1 << n):
        for r in range(len(free) + 1):
            for extra in itertools.combinations(free, r):
                lab = MultisetLabel(e, natural.base | set(extra), atoms)
                tried += 1
                if _try_extension(nodes1, order1, "new2", lab, (a1.id, a3.id)).consistent:
                    alts.append(lab)
    return ExtensionReport(first, second, tuple(alts), tried)


# -- set-coded orders --------------------------------------------------------------------------


def subset_code_order(family: Iterable[str | Iterable[str]]) -> IntendedOrder:
    sets = [frozenset(s) for s in family]
    if len(set(sets)) != len(sets):
        raise DomainError("duplicate sets in family")
    ids = ["".join(sorted(s)) for s in sets]
    edges = [(ids[i], ids[j]) for i, j in itertools.permutations(range(len(sets)), 2) if sets[i] < sets[j]]
    return IntendedOrder(tuple(ids), frozenset(edges))


def longest_chain(order: IntendedOrder) -> int:
    """Number of elements on a longest chain."""
    memo: dict = {}

    def height(v):
        if v not in memo:
            memo[v] = 1 + max((height(u) for u in order.nodes if order.less(u, v)), default=0)
        return memo[v]

    return max((height(v) for v in order.nodes), default=0)


def antichains(order: IntendedOrder) -> Iterator[tuple]:
    nodes = order.nodes
    for r in range(1, len(nodes) + 1):
        for combo in itertools.combinations(nodes, r):
            if all(not order.comparable(u, v) for u, v in itertools.combinations(combo, 2)):
                yield combo


def maximal_antichains(order: IntendedOrder) -> list[tuple]:
    out = []
    for ac in antichains(order):
        s = set(ac)
        if all(v in s or any(order.comparable(u, v) for u in ac) for v in order.nodes):
            out.append(ac)
    return out


def width(order: IntendedOrder) -> int:
    return max((len(a) for a in antichains(order)), default=0)


def antichain_order(size: int) -> IntendedOrder:
    return IntendedOrder(tuple(range(size)), frozenset())


def chain_order(size: int) -> IntendedOrder:
    return IntendedOrder(tuple(range(size)), frozenset((i, i + 1) for i in range(size - 1)))


# -- minimal alphabets -------------------------------------------------------------------------

_SEARCH_LIMIT = 5_000_000


def _candidates(mode: str, atoms: int, exp_bound: int) -> list[tuple[int, int]]:
    """Labels as ``(exp, base_mask)``. Sets mode uses ``exp = 0`` only;
    multisets mode spends one atom on ``a``."""
    if mode == "sets":
        return [(0, m) for m in range(1 << atoms)]
    if mode == "multisets":
        if atoms < 1:
            return []
        return [(e, m) for m in range(1 << (atoms - 1)) for e in range(exp_bound + 1)]
    raise DomainError(f"unknown mode {mode!r}")


def _leq(p, q) -> bool:
    return p[0] <= q[0] and p[1] & ~q[1] == 0


def iter_labelings(order: IntendedOrder, mode: str, atoms: int, exp_bound: int | None = None) -> Iterator[dict]:
    """Injective labelings whose induced order is exactly ``order``.

    Base atoms are introduced in first-use order (a new label may only add
    the next unused atoms), which removes renamings of the base atoms.
    """
    nodes = list(order.nodes)
    exp_bound = len(nodes) if exp_bound is None else exp_bound
    cands = _candidates(mode, atoms, exp_bound)
    less = order.less
    chosen: list[tuple[int, int]] = []
    steps = [0]

    def fits(idx, lab, used):
        new = lab[1] & ~((1 << used) - 1)
        if new and new != ((1 << (used + bin(new).count("1"))) - 1) & ~((1 << used) - 1):
            return False
        for j in range(idx):
            other = chosen[j]
            if other == lab:
                return False
            if _leq(other, lab) != less(nodes[j], nodes[idx]):
                return False
            if _leq(lab, other) != less(nodes[idx], nodes[j]):
                return False
        return True

    def rec(idx, used):
        steps[0] += 1
        if steps[0] > _SEARCH_LIMIT:
            raise ResourceLimitError("labeling search exceeded its step budget")
        if idx == len(nodes):
            yield dict(zip(nodes, chosen))
            return
        for lab in cands:
            if fits(idx, lab, used):
                chosen.append(lab)
                yield from rec(idx + 1, max(used, lab[1].bit_length()))
                chosen.pop()

    yield from rec(0, 0)


def min_label_bruteforce(order: IntendedOrder, mode: str = "sets", max_atoms: int = 6, exp_bound: int | None = None) -> int | None:
    """Smallest atom count admitting an exact labeling, or ``None`` above ``max_atoms``."""
    limit = 8 if mode == "sets" else 6
    if len(order.nodes) > limit:
        raise ResourceLimitError(f"{mode} mode brute force is limited to {limit} nodes")
    for k in range(0 if mode == "sets" else 1, max_atoms + 1):
        if next(iter_labelings(order, mode, k, exp_bound), None) is not None:
            return k
    return None


def labeling_exists(order: IntendedOrder, mode: str, atoms: int, exp_bound: int | None = None) -> bool:
    """Unbounded-size variant of the brute force for explicit lower-bound checks."""
    return next(iter_labelings(order, mode, atoms, exp_bound), None) is not None


def coding_classes(order: IntendedOrder, mode: str, atoms: int, exp_bound: int | None = None) -> dict[frozenset, dict]:
    """Optimal labelings grouped by which nodes carry base atoms (one example each)."""
    out: dict[frozenset, dict] = {}
    for lab in iter_labelings(order, mode, atoms, exp_bound):
        key = frozenset(v for v, (_, m) in lab.items() if m)
        out.setdefault(key, lab)
    return out


def render_label(lab: tuple[int, int], atoms: Sequence[str] = ("b", "c", "d", "e", "f", "g")) -> str:
    return str(MultisetLabel(lab[0], subset_by_code(atoms, lab[1]), tuple(atoms)))


def not_isomorph_order() -> IntendedOrder:
    """``X`` below ``Y``, ``Z`` isolated."""
    return IntendedOrder(("X", "Y", "Z"), frozenset({("X", "Y")}))


def sets_antichain_size(atoms: int) -> int:
    """Largest antichain of subsets of ``atoms`` atoms (middle binomial)."""
    from math import comb

    return comb(atoms, atoms // 2)


def check_labeling(order: IntendedOrder, labels: dict) -> bool:
    """Does ``{node: (exp, base_mask)}`` induce exactly ``order``?"""
    nodes = [LabeledNode(v, MultisetLabel(e, {i for i in range(m.bit_length()) if m >> i & 1})) for v, (e, m) in labels.items()]
    try:
        return induced_order(nodes).same_as(order)
    except DomainError:
        return False

