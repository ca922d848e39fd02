"""The broken-loop family and its layered witness.

For a loop of length ``n`` over attributes ``a, b1..bn`` with the link at
index ``i`` removed, :func:`build_witness` produces a layered binary function
set in which exactly the remaining loop triples (plus trivial ones) hold.
Layers are never multiplied out: a triple holds in the product iff it holds
in every layer, so verification ANDs per-layer scan tables.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateConstructionWarning, DomainError, PreconditionError
from .funcset import (
    AttributeSet,
    FunctionSet,
    LayeredFunctionSet,
    all_but,
    assignment_from,
    compose_layers,
    constant_set,
    pair_set,
    parity_set,
)
from .independence import scan_table
from .triples import DEFAULT_MAX_ATTRS, Triple, TripleSet, check_bound, trivial_mask


@dataclass(frozen=True)
class LoopSpec:
    n: int
    i: int

    def __post_init__(self):
        if self.n < 3:
            raise DomainError("loop length must be at least 3")
        if not 1 <= self.i <= self.n:
            raise DomainError("broken index must lie in 1..n")

    @property
    def b(self) -> list[str]:
        return [f"b{k}" for k in range(1, self.n + 1)]

    @cached_property
    def attrs(self) -> AttributeSet:
        return AttributeSet(("a", *self.b))

    def bk(self, k: int) -> str:
        """``b_k`` with indices taken cyclically (``b_{n+1} = b_1``)."""
        return f"b{(k - 1) % self.n + 1}"


def loop_order(spec: LoopSpec) -> list[str]:
    """``b_{i+1} ⊳ ... ⊳ b_n ⊳ b_1 ⊳ ... ⊳ b_i``, first element greatest."""
    return [spec.bk(spec.i + 1 + j) for j in range(spec.n)]


def _loop_triples(spec: LoopSpec, skip: int | None) -> TripleSet:
    attrs = spec.attrs
    return TripleSet(
        attrs, [Triple.of(attrs, "a", spec.bk(k), spec.bk(k + 1)) for k in range(1, spec.n + 1) if k != skip]
    )


def preserved(spec: LoopSpec) -> TripleSet:
    """``P``: the loop triples ``a b_k b_{k+1}`` for every ``k ≠ i``."""
    return _loop_triples(spec, spec.i)


def loop_family(n: int) -> TripleSet:
    """The full loop ``a b_1 b_2, ..., a b_n b_1``; ``<∅|A|B>`` triples are implicit."""
    return _loop_triples(LoopSpec(n, 1), None)


def set_distance(s: int, t: int) -> int:
    """Number of element replacements turning ``s`` into ``t``."""
    return max(bin(s & ~t).count("1"), bin(t & ~s).count("1"))


def dmin(t: Triple, p: TripleSet) -> int:
    if not len(p):
        raise PreconditionError("dmin needs a nonempty preserved family")
    return min(set_distance(t.union, q.union) for q in p)


# -- the destruction plan --------------------------------------------------------------


@dataclass(frozen=True)
class DestructionPlan:
    spec: LoopSpec
    layers: LayeredFunctionSet
    labels: tuple[str, ...]  # one per layer, naming what it is built to destroy

    def layer(self, label: str) -> FunctionSet:
        return self.layers.layers[self.labels.index(label)]

    def without(self, label: str) -> DestructionPlan:
        """The plan minus the layer labelled ``label`` (for mutation tests)."""
        if label not in self.labels:
            raise DomainError(f"no layer labelled {label!r}")
        keep = [k for k, lab in enumerate(self.labels) if lab != label]
        return DestructionPlan(
            self.spec, LayeredFunctionSet(tuple(self.layers.layers[k] for k in keep)), tuple(self.labels[k] for k in keep)
        )

    def destroyed(self, label: str) -> TripleSet:
        """Nontrivial triples failing in the given layer."""
        layer = self.layer(label)
        table = ~scan_table(layer) & ~trivial_mask(len(layer.attrs))
        return TripleSet.from_table(layer.attrs, table)

    def __len__(self):
        return len(self.labels)


def dmin0_label(y: str, z: str) -> str:
    return f"dmin0 a|{y}|{z}"


def build_witness(spec: LoopSpec) -> DestructionPlan:
    attrs = spec.attrs
    names = attrs.names
    p = preserved(spec)
    layers: list[FunctionSet] = []
    labels: list[str] = []

    def add(label, layer):
        layers.append(layer)
        labels.append(label)

    # triples spanning four or more attributes
    for quad in itertools.combinations(names, 4):
        add("parity " + " ".join(quad), parity_set(attrs, quad))
    # empty middle
    add("constant", constant_set(attrs))
    # a in the middle
    add("pair a=0", pair_set(attrs, assignment_from(attrs, 1, a=0)))
    # three attributes, a not on the outside
    for yp in names[1:]:
        add(f"pair a={yp}=0", pair_set(attrs, assignment_from(attrs, 1, **{"a": 0, yp: 0})))

    order = loop_order(spec)
    rank = {b: r for r, b in enumerate(order)}
    seen_sets = set()
    for y, z in itertools.permutations(names[1:], 2):
        t = Triple.of(attrs, "a", y, z)
        if t in p:
            continue
        if dmin(t, p) > 0:
            key = t.union
            if key not in seen_sets:
                seen_sets.add(key)
                add(f"all_but a={y}={z}=0", all_but(attrs, {"a": 0, y: 0, z: 0}))
            continue
        # dmin 0: the reversed orientation of a preserved triple, so z is
        # the immediate predecessor of y in the loop order
        if rank[z] + 1 != rank[y]:
            raise PreconditionError(f"dmin-0 target a|{y}|{z} is not an adjacent pair")
        g = {"a": 1}
        for b in order:
            g[b] = 1 if rank[b] <= rank[z] else 0
        with warnings.catch_warnings():
            warnings.simplefilter("error", DegenerateConstructionWarning)
            add(dmin0_label(y, z), pair_set(attrs, g))
    return DestructionPlan(spec, LayeredFunctionSet(tuple(layers)), tuple(labels))


# -- verification ------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    held: TripleSet
    expected: TripleSet
    spurious: TripleSet
    missing: TripleSet

    @property
    def ok(self) -> bool:
        return not len(self.spurious) and not len(self.missing)

    def summary(self) -> str:
        return f"spurious: {len(self.spurious)}, missing: {len(self.missing)}"


def held_table(plan: DestructionPlan, max_attrs: int = DEFAULT_MAX_ATTRS) -> np.ndarray:
    check_bound(len(plan.layers.attrs), max_attrs)
    return scan_table(plan.layers, max_attrs)


def verify_witness(plan: DestructionPlan, spec: LoopSpec | None = None, max_attrs: int = DEFAULT_MAX_ATTRS) -> WitnessReport:
    """Classify all ``4**(n+1)`` triples layer by layer against ``P``."""
    spec = spec or plan.spec
    attrs = plan.layers.attrs
    if attrs != spec.attrs:
        raise DomainError("plan and spec use different attribute sets")
    held = TripleSet.from_table(attrs, held_table(plan, max_attrs))
    expected = preserved(spec)
    return WitnessReport(held, expected, held - expected, expected - held)


def verify_materialized(plan: DestructionPlan, max_members: int = 1 << 22) -> np.ndarray:
    """Scan table of the multiplied-out witness (small ``n`` only)."""
    sigma = compose_layers(plan.layers, max_members=max_members)
    return scan_table(sigma)


def layer_preserves(plan: DestructionPlan) -> dict[str, bool]:
    """Per layer: does every triple of ``P`` hold in it?"""
    p = preserved(plan.spec)
    idx = [t.index for t in p] + [t.swap().index for t in p]
    out = {}
    for label, layer in zip(plan.labels, plan.layers.layers):
        out[label] = bool(scan_table(layer)[idx].all()) if idx else True
    return out


def uncovered_targets(plan: DestructionPlan) -> TripleSet:
    """Nontrivial triples outside ``P`` that no layer destroys."""
    return verify_witness(plan).spurious


__all__ = [
    "LoopSpec",
    "loop_order",
    "preserved",
    "loop_family",
    "set_distance",
    "dmin",
    "DestructionPlan",
    "build_witness",
    "WitnessReport",
    "verify_witness",
    "held_table",
    "dmin0_label",
    "verify_materialized",
    "layer_preserves",
    "uncovered_targets",
]
