"""Universal proof trees.

A tree starts from two generic functions σ and τ and combines nodes pairwise
through triples. Every node records, per attribute, the set of *origins* its
value is known to equal: ``"s"`` (σ's value), ``"t"`` (τ's value) or an
integer ``k`` (the fresh default introduced by inner node ``k``). A set with
several origins records a known equality.

Combining ``l`` and ``r`` through ``<X|Y|Z>`` needs ``l`` and ``r`` to agree on
``Y``. Agreement holds by construction when the origin sets share a symbol.
Otherwise, if one side carries σ's value and the other τ's, the agreement
is *assumed* (σ = τ there) and the attribute becomes a prerequisite. Any
other mismatch is a :class:`ConstructionError`.

A node yields the derived triple ``<X'|Y'|Z'>`` when ``X'`` carries σ's
values, ``Z'`` carries τ's, ``Y'`` carries either, and every prerequisite
lies in ``Y'``: then any σ, τ agreeing on ``Y'`` produce the node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstructionError, DomainError, ResourceLimitError
from .funcset import AttributeSet
from .rules import single_triple_consequences
from .triples import Triple, TripleSet, decode_all

S, T = "s", "t"

Origins = tuple[frozenset, ...]


@dataclass(frozen=True, eq=False)
class ProofNode:
    attrs: AttributeSet
    origins: Origins
    prereq: int  # attributes where σ = τ was assumed anywhere in the tree
    left: ProofNode | None = None
    right: ProofNode | None = None
    used: Triple | None = None
    k: int | None = None
    inner: frozenset = field(default=frozenset())  # ids k of all inner nodes below and including this one

    @property
    def is_leaf(self) -> bool:
        return self.used is None

    def region(self, sym) -> int:
        m = 0
        for i, o in enumerate(self.origins):
            if sym in o:
                m |= 1 << i
        return m

    @property
    def sigma_region(self) -> int:
        return self.region(S)

    @property
    def tau_region(self) -> int:
        return self.region(T)

    def nodes(self) -> list[ProofNode]:
        """Distinct inner nodes, children before parents."""
        out: list[ProofNode] = []
        seen: set[int] = set()

        def walk(n: ProofNode):
            if n.is_leaf or id(n) in seen:
                return
            seen.add(id(n))
            walk(n.left)
            walk(n.right)
            out.append(n)

        walk(self)
        return out

    def __repr__(self):
        if self.is_leaf:
            return "σ" if self.origins[0] == frozenset({S}) else "τ"
        return f"ρ{self.k}[{self.used.compact()}]"


def universal_pair(attrs: AttributeSet, y=0) -> tuple[ProofNode, ProofNode]:
    """The leaves σ and τ.

    The seed ``y`` (where σ and τ are meant to agree) only affects
    :func:`render`; agreement is tracked through prerequisites instead.
    """
    n = len(attrs)
    attrs.mask(y)  # validates
    sigma = ProofNode(attrs, tuple(frozenset({S}) for _ in range(n)), 0)
    tau = ProofNode(attrs, tuple(frozenset({T}) for _ in range(n)), 0)
    return sigma, tau


def combine(l: ProofNode, r: ProofNode, t: Triple, k: int) -> ProofNode:
    """Node taking ``t.X`` from ``l``, ``t.Z`` from ``r``, the fresh default
    ``d_k`` elsewhere, with ``l`` and ``r`` agreeing on ``t.Y``."""
    if l.attrs != r.attrs or t.attrs != l.attrs:
        raise DomainError("nodes and triple use different attribute sets")
    if k in l.inner or k in r.inner:
        raise ConstructionError(f"default symbol d{k} already used below")
    origins = []
    prereq = l.prereq | r.prereq
    fresh = frozenset({k})
    for i in range(len(l.attrs)):
        bit = 1 << i
        if t.x & bit:
            origins.append(l.origins[i])
        elif t.z & bit:
            origins.append(r.origins[i])
        elif t.y & bit:
            lo, ro = l.origins[i], r.origins[i]
            if lo & ro:
                origins.append(lo | ro)
            elif (S in lo and T in ro) or (T in lo and S in ro):
                prereq |= bit
                origins.append(lo | ro)
            else:
                name = l.attrs.names[i]
                raise ConstructionError(f"no agreement on {name}: {_sym(lo)} vs {_sym(ro)}")
        else:
            origins.append(fresh)
    return ProofNode(l.attrs, tuple(origins), prereq, l, r, t, k, l.inner | r.inner | {k})


def _sym(o: frozenset) -> str:
    return "=".join(sorted(str(x) if isinstance(x, str) else f"d{x}" for x in o))


def render(node: ProofNode, seed=0) -> str:
    """Concrete digits: σ is 0 everywhere, τ is 0 on the seed and 1 elsewhere,
    ``d_k`` is ``k+1``."""
    seed = node.attrs.mask(seed)
    out = []
    for i, o in enumerate(node.origins):
        if S in o:
            out.append(0)
        elif T in o:
            out.append(0 if seed >> i & 1 else 1)
        else:
            out.append(min(o) + 1)
    return "".join(str(v) for v in out) if all(v < 10 for v in out) else ",".join(str(v) for v in out)


# -- interpretation -----------------------------------------------------------------------


@dataclass(frozen=True)
class Interpretation:
    conclusion: Triple
    witness: ProofNode


def conclusion_table(node: ProofNode) -> np.ndarray:
    n = len(node.attrs)
    xm, ym, zm = decode_all(n)
    s, t, pre = node.sigma_region, node.tau_region, node.prereq
    return (
        (xm != 0)
        & (zm != 0)
        & (xm & ~s == 0)
        & (zm & ~t == 0)
        & (ym & ~(s | t) == 0)
        & (ym & pre == pre)
    )


def conclusions(node: ProofNode) -> TripleSet:
    return TripleSet.from_table(node.attrs, conclusion_table(node))


def interpret(node: ProofNode) -> list[Interpretation]:
    return [Interpretation(c, node) for c in conclusions(node)]


# -- checking ------------------------------------------------------------------------------


def usable_triples(premises: Iterable[Triple]) -> TripleSet:
    """Premises plus everything (a)-(c) give from a single premise."""
    premises = list(premises)
    if not premises:
        raise DomainError("no premises")
    out = TripleSet(premises[0].attrs)
    for p in premises:
        out = out | single_triple_consequences(p)
    return out


@dataclass(frozen=True)
class DerivationCheck:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_derivation(premises: Iterable[Triple], conclusion: Triple, tree: ProofNode) -> DerivationCheck:
    premises = list(premises)
    allowed = usable_triples(premises) if premises else TripleSet(conclusion.attrs)
    ks: dict[int, ProofNode] = {}
    for node in tree.nodes():
        if node.used not in allowed:
            return DerivationCheck(False, f"{node!r} uses {node.used.compact()}, not available from the premises")
        if node.k in ks and ks[node.k] is not node:
            return DerivationCheck(False, f"default d{node.k} introduced twice")
        ks[node.k] = node
        try:
            rebuilt = combine(node.left, node.right, node.used, node.k)
        except ConstructionError as exc:
            return DerivationCheck(False, f"{node!r}: {exc}")
        if rebuilt.origins != node.origins or rebuilt.prereq != node.prereq:
            return DerivationCheck(False, f"{node!r} does not match its construction")
    if conclusion.trivial:
        return DerivationCheck(False, "conclusion has an empty outside")
    if not conclusion_table(tree)[conclusion.index]:
        return DerivationCheck(False, f"root does not yield {conclusion.compact()}")
    return DerivationCheck(True)


# -- search ------------------------------------------------------------------------------------


def _pattern(node: ProofNode):
    rename: dict = {}
    out = []
    for o in node.origins:
        cell = []
        for sym in sorted(o, key=lambda x: (isinstance(x, int), x)):
            if isinstance(sym, int):
                sym = rename.setdefault(sym, len(rename))
                cell.append(("d", sym))
            else:
                cell.append((sym, 0))
        out.append(tuple(cell))
    return tuple(out), node.prereq


def search_nodes(premises: Sequence[Triple], max_nodes: int, max_pool: int = 50_000) -> list[ProofNode]:
    """All distinct node patterns reachable with at most ``max_nodes`` inner nodes."""
    premises = list(premises)
    if not premises:
        return []
    attrs = premises[0].attrs
    usable = [u for t in usable_triples(premises) for u in (t, t.swap())]
    sigma, tau = universal_pair(attrs)
    pool: list[ProofNode] = [sigma, tau]
    seen = {_pattern(sigma), _pattern(tau)}
    next_k = 1
    frontier_start = 0
    while True:
        added: list[ProofNode] = []
        size = len(pool)
        for li in range(size):
            for ri in range(size):
                if max(li, ri) < frontier_start:
                    continue  # pair examined in an earlier round
                l, r = pool[li], pool[ri]
                cost = len(l.inner | r.inner) + 1
                if cost > max_nodes:
                    continue
                for u in usable:
                    try:
                        node = combine(l, r, u, next_k)
                    except ConstructionError:
                        continue
                    key = _pattern(node)
                    if key in seen:
                        continue
                    seen.add(key)
                    added.append(node)
                    next_k += 1
                    if len(pool) + len(added) > max_pool:
                        raise ResourceLimitError(f"proof search exceeded {max_pool} node patterns")
        if not added:
            return pool[2:]
        frontier_start = size
        pool.extend(added)


def search_derivations(
    premises: Sequence[Triple], max_nodes: int, max_pool: int = 50_000, attrs: AttributeSet | None = None
) -> TripleSet:
    """Conclusions of all trees with at most ``max_nodes`` inner nodes.

    Only derivability within the bound is claimed: a triple missing from the
    result may still follow semantically. Without premises nothing with
    nonempty outsides is derivable; ``attrs`` names the attribute set then.
    """
    premises = list(premises)
    if not premises:
        if attrs is None:
            raise DomainError("search without premises needs an attribute set")
        return TripleSet(attrs)
    attrs = premises[0].attrs
    table = np.zeros(4 ** len(attrs), dtype=bool)
    for node in search_nodes(premises, max_nodes, max_pool):
        table |= conclusion_table(node)
    return TripleSet.from_table(attrs, table)


def find_derivation(premises: Sequence[Triple], conclusion: Triple, max_nodes: int) -> ProofNode | None:
    for node in search_nodes(premises, max_nodes):
        if conclusion_table(node)[conclusion.index]:
            return node
    return None


# -- the worked examples ------------------------------------------------------------------------


@dataclass(frozen=True)
class Example:
    name: str
    premises: tuple[Triple, ...]
    conclusion: Triple
    root: ProofNode
    seed: int
    steps: tuple[ProofNode, ...]

    def rendered(self) -> list[str]:
        sigma, tau = universal_pair(self.root.attrs, self.seed)
        return [render(sigma, self.seed), render(tau, self.seed)] + [render(n, self.seed) for n in self.steps]


def _tr(attrs, text: str) -> Triple:
    x, y, z = (p.split() for p in text.split("|"))
    return Triple.of(attrs, x, y, z)


def _build(name, names, premises, conclusion, steps, seed) -> Example:
    """``steps``: ``(left, right, triple)`` with ``left``/``right`` either
    ``"s"``, ``"t"`` or the 1-based index of an earlier step."""
    attrs = AttributeSet(tuple(names))
    sigma, tau = universal_pair(attrs, attrs.mask(seed))
    built: list[ProofNode] = []

    def ref(x):
        return {"s": sigma, "t": tau}[x] if isinstance(x, str) else built[x - 1]

    for k, (l, r, text) in enumerate(steps, start=1):
        built.append(combine(ref(l), ref(r), _tr(attrs, text), k))
    prem = tuple(_tr(attrs, p) for p in premises)
    return Example(name, prem, _tr(attrs, conclusion), built[-1], attrs.mask(seed), tuple(built))


def example_r1() -> Example:
    return _build(
        "R-1", "ABCD", ["A | B | C", "A | B C | D"], "A | B | C D",
        [("s", "t", "A | B | C"), (1, "t", "A | B C | D")], ["B"],
    )  # fmt: skip


def example_r2() -> Example:
    """Bin1 with ``Y' = V``: XYZ, XVZ, Y(XZ)V ⊢ X(YV)Z."""
    return _build(
        "R-2", "XYVZ", ["X | Y | Z", "X | V | Z", "Y | X Z | V"], "X | Y V | Z",
        [("s", "t", "X | Y | Z"), ("s", "t", "X | V | Z"), (1, 2, "Y | X Z | V")], ["Y", "V"],
    )  # fmt: skip


def example_r3() -> Example:
    return _build(
        "R-3", "ABCDE", ["A | B | C", "A | C | D", "A | D | E", "A | E | B"], "A | B | E",
        [("s", "t", "A | B | C"), (1, "t", "A | C | D"), (2, "t", "A | D | E"), (3, "t", "A | E | B")], ["B"],
    )  # fmt: skip


def example_r4() -> Example:
    return _build(
        "R-4", "ABCDEF", ["B | A | C D", "D | F | C E", "A B | C D | E F"], "B | A D F | C E",
        [("s", "t", "B | A | C D"), ("s", "t", "D | F | C E"), (1, 2, "A B | C D | E F")], ["A", "D", "F"],
    )  # fmt: skip


R5_NAMES = ("A", "A'", "B", "B'", "C", "C'", "D", "D'")


def example_r5() -> Example:
    return _build(
        "R-5", R5_NAMES,
        ["A A' | B | C", "A | D | C D'", "A B' | C | C' D", "A' B' | C | C' D'", "A D | B' C C' | A' D'", "B | C | A D D'"],
        "A | B D | C D'",
        [
            ("s", "t", "A A' | B | C"),
            ("s", "t", "A | D | C D'"),
            (1, 2, "A B' | C | C' D"),
            (1, 2, "A' B' | C | C' D'"),
            (3, 4, "A D | B' C C' | A' D'"),
            (1, 5, "B | C | A D D'"),
        ],
        ["B", "D"],
    )  # fmt: skip


EXAMPLES = {"R-1": example_r1, "R-2": example_r2, "R-3": example_r3, "R-4": example_r4, "R-5": example_r5}


__all__ = [
    "ProofNode",
    "Interpretation",
    "universal_pair",
    "combine",
    "render",
    "interpret",
    "conclusions",
    "conclusion_table",
    "check_derivation",
    "search_nodes",
    "search_derivations",
    "find_derivation",
    "usable_triples",
    "EXAMPLES",
    "example_r1",
    "example_r2",
    "example_r3",
    "example_r4",
    "example_r5",
]
