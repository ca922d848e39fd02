"""Rule schemas over triples and everything that checks them.

A schema is a list of premise patterns and one conclusion pattern over set
variables. An instance assigns every attribute to at most one variable, so
the variables receive pairwise-disjoint (possibly empty) attribute sets;
with ``k`` variables and ``n`` attributes there are ``(k+1)**n`` instances.
Each instance is turned into dense triple indices once per ``(rule, n)``, and
checking a relation is then a gather on its boolean triple table.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, PreconditionError, ResourceLimitError
from .funcset import AttributeSet, FunctionSet
from .independence import RationalMeasure, prob_scan_table, scan_table
from .triples import (
    DEFAULT_MAX_ATTRS,
    Triple,
    TripleSet,
    check_bound,
    decode_all,
    index_of,
    three_way_splits,
    trivial_mask,
)

# Largest instance table built in one piece (instances x attributes).
MAX_INSTANCES = 1 << 23

Pattern = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class RuleSchema:
    name: str
    variables: tuple[str, ...]
    premises: tuple[Pattern, ...]
    conclusion: Pattern

    def __post_init__(self):
        used = {v for p in self.premises for part in p for v in part}
        concl = {v for part in self.conclusion for v in part}
        if self.premises and not concl <= used:
            raise DomainError(f"{self.name}: conclusion variable missing from premises")

    @classmethod
    def parse(cls, name: str, premises: Sequence[str], conclusion: str) -> RuleSchema:
        """Patterns look like ``"X | Y W | Z"``; ``-`` marks an empty part."""
        names: list[str] = []

        def pat(text: str) -> Pattern:
            parts = [p.split() for p in text.split("|")]
            if len(parts) != 3:
                raise DomainError(f"bad pattern {text!r}")
            out = []
            for part in parts:
                idx = []
                for v in part:
                    if v == "-":
                        continue
                    if v not in names:
                        names.append(v)
                    idx.append(names.index(v))
                out.append(tuple(idx))
            flat = [v for p in out for v in p]
            if len(set(flat)) != len(flat):
                raise DomainError(f"variable repeated in pattern {text!r}")
            return tuple(out)  # type: ignore[return-value]

        prem = tuple(pat(p) for p in premises)
        concl = pat(conclusion)
        return cls(name, tuple(names), prem, concl)

    def render_pattern(self, p: Pattern) -> str:
        return " | ".join(" ".join(self.variables[v] for v in part) or "-" for part in p)

    def __str__(self):
        prem = ", ".join(self.render_pattern(p) for p in self.premises)
        return f"{self.name}: {prem} => {self.render_pattern(self.conclusion)}"


def _loop1(n: int) -> RuleSchema:
    bs = [f"B{k}" for k in range(1, n + 1)]
    prem = [f"A | {bs[k]} | {bs[(k + 1) % n]}" for k in range(n)]
    return RuleSchema.parse(f"loop1({n})", prem, f"A | {bs[0]} | {bs[-1]}")


_FIXED = {
    "symmetry": RuleSchema.parse("symmetry", ["X | Y | Z"], "Z | Y | X"),
    "decomposition": RuleSchema.parse("decomposition", ["X | Y | Z W"], "X | Y | Z"),
    "weak-union": RuleSchema.parse("weak-union", ["X | Y | Z W"], "X | Y W | Z"),
    "contraction": RuleSchema.parse("contraction", ["X | Y | Z", "X | Y Z | W"], "X | Y | Z W"),
    "intersection": RuleSchema.parse("intersection", ["X | Y W | Z", "X | Y Z | W"], "X | Y | Z W"),
    "empty-outside": RuleSchema.parse("empty-outside", [], "X | Y | -"),
    "bin1": RuleSchema.parse("bin1", ["X | Y | Z", "X | Y' | Z", "Y | X Z | Y'"], "X | Y Y' | Z"),
    "bin2": RuleSchema.parse("bin2", ["X | Y | Z", "X | Z | Y'", "Y | X Z | Y'"], "X | Y Y' | Z"),
    "loop2": RuleSchema.parse(
        "loop2",
        ["A | B | C", "A | C | D", "D | A | E", "D | E | F", "F | D | G", "F | G | H", "H | F | B"],
        "H | B | F",
    ),
}

ALIASES = {"a": "symmetry", "b": "decomposition", "c": "weak-union", "d": "contraction", "e": "intersection", "empty": "empty-outside"}
GRAPHOID = ("symmetry", "decomposition", "weak-union", "contraction")


def get_rule(name: str) -> RuleSchema:
    """Look up a schema: ``"contraction"``, ``"d"``, ``"loop1(4)"``, ``"loop1_4"``."""
    key = name.strip().lower()
    key = ALIASES.get(key, key)
    if key in _FIXED:
        return _FIXED[key]
    for prefix in ("loop1(", "loop1_", "loop1"):
        if key.startswith(prefix):
            num = key[len(prefix) :].rstrip(")")
            if num.isdigit() and int(num) >= 2:
                return _loop1(int(num))
            if num.isdigit():
                raise DomainError("loop1 needs length at least 2 (length 1 repeats a variable)")
    raise DomainError(f"unknown rule {name!r}")


def rule_names() -> list[str]:
    return list(_FIXED) + ["loop1(n)"]


def rules(names: Iterable[str]) -> list[RuleSchema]:
    return [get_rule(n) for n in names]


def graphoid_rules(with_empty: bool = True) -> list[RuleSchema]:
    out = rules(GRAPHOID)
    if with_empty:
        out.append(get_rule("empty-outside"))
    return out


# -- instances -------------------------------------------------------------------------


@dataclass(frozen=True)
class Instances:
    """All nontrivial-conclusion instances of a rule over ``n`` attributes."""

    assign: np.ndarray  # (N, n) variable index + 1 per attribute, 0 = unused
    var_masks: np.ndarray  # (N, k) attribute mask per variable
    premises: np.ndarray  # (N, p) dense triple indices
    conclusion: np.ndarray  # (N,)


@lru_cache(maxsize=64)
def instances(rule: RuleSchema, n: int) -> Instances:
    k = len(rule.variables)
    total = (k + 1) ** n
    if total * max(n, 1) > MAX_INSTANCES:
        raise ResourceLimitError(f"{rule.name} over {n} attributes has {total} instances (limit {MAX_INSTANCES // max(n, 1)})")
    codes = np.arange(total, dtype=np.int64)
    assign = np.zeros((total, n), dtype=np.int8)
    var_masks = np.zeros((total, k), dtype=np.int64)
    for i in range(n):
        digit = (codes // (k + 1) ** i) % (k + 1)
        assign[:, i] = digit
        for v in range(k):
            var_masks[:, v] |= np.where(digit == v + 1, 1 << i, 0)

    def idx(p: Pattern) -> np.ndarray:
        parts = []
        for part in p:
            m = np.zeros(total, dtype=np.int64)
            for v in part:
                m |= var_masks[:, v]
            parts.append(m)
        return index_of(n, *parts)

    concl = idx(rule.conclusion)
    keep = ~trivial_mask(n)[concl]
    prem = np.stack([idx(p) for p in rule.premises], axis=1) if rule.premises else np.zeros((total, 0), dtype=np.int64)
    out = Instances(assign[keep], var_masks[keep], prem[keep], concl[keep])
    for a in (out.assign, out.var_masks, out.premises, out.conclusion):
        a.setflags(write=False)
    return out


@dataclass(frozen=True)
class Violation:
    rule: RuleSchema
    attrs: AttributeSet
    instantiation: tuple[int, ...]  # attribute mask per rule variable
    kind: str  # "closure", "semantic" or "prob"
    context: object = field(default=None, compare=False, repr=False)

    def _triple(self, p: Pattern) -> Triple:
        ms = []
        for part in p:
            m = 0
            for v in part:
                m |= self.instantiation[v]
            ms.append(m)
        return Triple(self.attrs, *ms)

    @property
    def premises(self) -> list[Triple]:
        return [self._triple(p) for p in self.rule.premises]

    @property
    def conclusion(self) -> Triple:
        return self._triple(self.rule.conclusion)

    def binding(self) -> dict[str, tuple[str, ...]]:
        return {v: self.attrs.subset(m) for v, m in zip(self.rule.variables, self.instantiation)}

    def render(self) -> str:
        prem = ", ".join(t.compact() for t in self.premises)
        return f"{prem} => {self.conclusion.compact()}"

    def __str__(self):
        return f"{self.rule.name}: {self.render()}"

    def recheck(self) -> bool:
        """True when the instance still violates its context."""
        ctx = self.context
        if isinstance(ctx, TripleSet):
            ok = lambda t: t in ctx  # noqa: E731
        elif isinstance(ctx, RationalMeasure):
            from .independence import prob_indep

            ok = lambda t: prob_indep(ctx, t)  # noqa: E731
        elif ctx is not None:
            from .independence import set_indep

            ok = lambda t: set_indep(ctx, t)  # noqa: E731
        else:
            raise PreconditionError("violation carries no context")
        return all(ok(t) for t in self.premises) and not ok(self.conclusion)


def violating_rows(rule: RuleSchema, table: np.ndarray, n: int) -> np.ndarray:
    """Row numbers (into ``instances(rule, n)``) violated by ``table``."""
    inst = instances(rule, n)
    ok = table[inst.premises].all(axis=1) if inst.premises.shape[1] else np.ones(len(inst.conclusion), dtype=bool)
    return np.flatnonzero(ok & ~table[inst.conclusion])


def _violations(rule, table, attrs, kind, context, limit) -> list[Violation]:
    n = len(attrs)
    rows = violating_rows(rule, table, n)
    if limit is not None:
        rows = rows[:limit]
    vm = instances(rule, n).var_masks
    return [Violation(rule, attrs, tuple(int(v) for v in vm[r]), kind, context) for r in rows]


def _check_rule_table(rule: RuleSchema, n: int, max_attrs: int):
    check_bound(n, max_attrs)
    instances(rule, n)  # raises on resource overflow before any scan


def check_closure(
    t: TripleSet, rule_list: Iterable[RuleSchema | str], max_attrs: int = DEFAULT_MAX_ATTRS, limit: int | None = None
) -> list[Violation]:
    """Instances whose premises lie in ``t`` but whose conclusion does not."""
    n = len(t.attrs)
    rule_list = [get_rule(r) if isinstance(r, str) else r for r in rule_list]
    for r in rule_list:
        _check_rule_table(r, n, max_attrs)
    table = t.table()
    out: list[Violation] = []
    for r in rule_list:
        out += _violations(r, table, t.attrs, "closure", t, limit)
    return out


def check_rule_semantic(
    rule: RuleSchema | str, sigma: FunctionSet, max_attrs: int = DEFAULT_MAX_ATTRS, limit: int | None = None
) -> list[Violation]:
    rule = get_rule(rule) if isinstance(rule, str) else rule
    _check_rule_table(rule, len(sigma.attrs), max_attrs)
    return _violations(rule, scan_table(sigma, max_attrs), sigma.attrs, "semantic", sigma, limit)


def check_rule_prob(
    rule: RuleSchema | str, p: RationalMeasure, max_attrs: int = DEFAULT_MAX_ATTRS, limit: int | None = None
) -> list[Violation]:
    rule = get_rule(rule) if isinstance(rule, str) else rule
    _check_rule_table(rule, len(p.attrs), max_attrs)
    return _violations(rule, prob_scan_table(p, max_attrs), p.attrs, "prob", p, limit)


def count_violations_batch(rule: RuleSchema, tables: np.ndarray, n: int, chunk: int = 1 << 24) -> np.ndarray:
    """Violation counts for a stack of triple tables (one per row)."""
    inst = instances(rule, n)
    tables = np.asarray(tables, dtype=bool)
    out = np.zeros(len(tables), dtype=np.int64)
    per = max(1, chunk // max(1, inst.premises.size + len(inst.conclusion)))
    for lo in range(0, len(tables), per):
        tab = tables[lo : lo + per]
        ok = tab[:, inst.premises].all(axis=2) if inst.premises.shape[1] else np.ones((len(tab), len(inst.conclusion)), bool)
        out[lo : lo + per] = (ok & ~tab[:, inst.conclusion]).sum(axis=1)
    return out


def scan_triples(sigma: FunctionSet, max_attrs: int = DEFAULT_MAX_ATTRS) -> TripleSet:
    """Every triple that holds in ``sigma`` (trivial ones implicitly)."""
    return TripleSet.from_table(sigma.attrs, scan_table(sigma, max_attrs))


# -- closure ---------------------------------------------------------------------------


def close_table(table: np.ndarray, n: int, rule_list: Sequence[RuleSchema]) -> np.ndarray:
    """Least superset of ``table`` closed under ``rule_list``."""
    table = np.array(table, dtype=bool)
    inst = [instances(r, n) for r in rule_list]
    while True:
        changed = False
        for i in inst:
            ok = table[i.premises].all(axis=1) if i.premises.shape[1] else np.ones(len(i.conclusion), bool)
            new = i.conclusion[ok & ~table[i.conclusion]]
            if len(new):
                table[new] = True
                changed = True
        if not changed:
            return table


def close(t: TripleSet, rule_list: Iterable[RuleSchema | str] = GRAPHOID) -> TripleSet:
    rl = [get_rule(r) if isinstance(r, str) else r for r in rule_list]
    return TripleSet.from_table(t.attrs, close_table(t.table(), len(t.attrs), rl))


# -- counterexample search ---------------------------------------------------------------


def iter_candidates(max_attrs: int, max_members: int, start: int = 0) -> Iterator[tuple[int, FunctionSet]]:
    """Binary function sets in search order, each with its cursor position.

    Order: attribute count ascending, then member count ascending, then
    lexicographic member combinations over the lexicographically sorted
    assignments. Resuming at ``start`` skips the first ``start`` candidates.
    """
    cursor = 0
    for n in range(1, max_attrs + 1):
        attrs = AttributeSet(tuple(_default_names(n)))
        cube = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)
        for size in range(1, min(max_members, len(cube)) + 1):
            count = math.comb(len(cube), size)
            if cursor + count <= start:
                cursor += count
                continue
            for combo in itertools.combinations(range(len(cube)), size):
                if cursor >= start:
                    yield cursor, FunctionSet(attrs, cube[list(combo)], (0, 1))
                cursor += 1


def _default_names(n: int) -> list[str]:
    letters = "xyzwuvst"
    return list(letters[:n]) if n <= len(letters) else [f"v{i}" for i in range(n)]


@dataclass(frozen=True)
class SearchResult:
    sigma: FunctionSet | None
    cursor: int  # next candidate to examine when resuming
    examined: int
    violation: Violation | None = None


def search(
    rule: RuleSchema | str, max_attrs: int, max_members: int, budget: int | None = None, start: int = 0
) -> SearchResult:
    rule = get_rule(rule) if isinstance(rule, str) else rule
    examined = 0
    cursor = start
    for cursor, sigma in iter_candidates(max_attrs, max_members, start):
        if budget is not None and examined >= budget:
            return SearchResult(None, cursor, examined)
        examined += 1
        n = len(sigma.attrs)
        if len(violating_rows(rule, scan_table(sigma), n)):
            v = check_rule_semantic(rule, sigma, limit=1)[0]
            return SearchResult(sigma, cursor + 1, examined, v)
    return SearchResult(None, cursor + 1 if examined else start, examined)


def search_counterexample(
    rule: RuleSchema | str, max_attrs: int, max_members: int, budget: int | None = None, start: int = 0
) -> FunctionSet | None:
    """First function set (in :func:`iter_candidates` order) violating ``rule``."""
    return search(rule, max_attrs, max_members, budget, start).sigma


# -- minimal failing triples and derived-rule checks ----------------------------------------


def _subset_and(table: np.ndarray, n: int, digit: int) -> np.ndarray:
    """``out[t]``: AND of ``table`` over all triples shrinking ``t``'s part
    ``digit`` (1 = X, 3 = Z) to a subset, itself included."""
    out = table.copy()
    idx = np.arange(4**n, dtype=np.int64)
    for i in range(n):
        sel = np.flatnonzero(((idx >> (2 * i)) & 3) == digit)
        out[sel] &= out[sel - digit * (4**i)]
    return out


def _proper_shrinks_hold(table: np.ndarray, n: int, digit: int) -> np.ndarray:
    closed = _subset_and(table, n, digit)
    idx = np.arange(4**n, dtype=np.int64)
    out = np.ones(4**n, dtype=bool)
    for i in range(n):
        sel = np.flatnonzero(((idx >> (2 * i)) & 3) == digit)
        out[sel] &= closed[sel - digit * (4**i)]
    return out


def sigma_mu_table(table: np.ndarray, n: int) -> np.ndarray:
    return ~table & ~trivial_mask(n) & _proper_shrinks_hold(table, n, 1) & _proper_shrinks_hold(table, n, 3)


def sigma_mu(t: TripleSet) -> TripleSet:
    """Failing triples whose every proper shrink of ``X`` or of ``Z`` holds.

    Returned as a :class:`TripleSet` (symmetric, canonical orientation).
    """
    n = len(t.attrs)
    return TripleSet.from_table(t.attrs, sigma_mu_table(t.table(), n))


@dataclass(frozen=True)
class ComplicViolation:
    minimal: Triple  # the sigma_mu triple
    derived: Triple  # the rearranged triple found in T

    def __str__(self):
        return f"{self.minimal.compact()} minimal failing, yet {self.derived.compact()} holds"


def complic_rearrangements(m: Triple, split_middle: bool = True) -> Iterator[Triple]:
    """``<X Y' Z' | X' Y Z'' | X'' Y'' Z>`` for every split of ``m``'s parts.

    Only splits with ``X Z'`` and ``X'' Z`` nonempty are produced: the
    argument moves ``Z' Z''`` right and ``X' X''`` left around those cores,
    so an empty core on either side breaks it. ``split_middle=False`` keeps
    ``Y`` whole (``Y' = Y'' = ∅``).
    """
    ysplits = three_way_splits(m.y) if split_middle else [(m.y, 0, 0)]
    ysplits = list(ysplits)
    for x0, x1, x2 in three_way_splits(m.x):
        for y0, y1, y2 in ysplits:
            for z0, z1, z2 in three_way_splits(m.z):
                if not (x0 | z1) or not (x2 | z0):
                    continue
                yield Triple(m.attrs, x0 | y1 | z1, x1 | y0 | z2, x2 | y2 | z0)


def func_complic_check(
    t: TripleSet, require_closed: bool = True, limit: int | None = None, split_middle: bool = True
) -> list[ComplicViolation]:
    """Rearrangements of minimal failing triples that nevertheless hold.

    Relations closed under (a)-(d) never have any; ``require_closed``
    checks that precondition first.
    """
    n = len(t.attrs)
    table = t.table()
    if require_closed:
        bad = check_closure(t, GRAPHOID, limit=1)
        if bad:
            raise PreconditionError(f"relation not closed under (a)-(d): {bad[0]}")
    mu = sigma_mu_table(table, n)
    xm, ym, zm = decode_all(n)
    out: list[ComplicViolation] = []
    for s in np.flatnonzero(mu):
        m = Triple(t.attrs, int(xm[s]), int(ym[s]), int(zm[s]))
        for d in complic_rearrangements(m, split_middle):
            if table[d.index]:
                out.append(ComplicViolation(m, d))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def single_triple_consequences(t: Triple) -> TripleSet:
    """``<X | X' Y Z' | Z>`` for ``X X' X'' = t.X``, ``Z Z' Z'' = t.Z`` with
    ``X, Z`` nonempty: everything (a), (b), (c) give from ``t`` alone."""
    found = []
    for x, x1, _ in three_way_splits(t.x):
        if not x:
            continue
        for z, z1, _ in three_way_splits(t.z):
            if z:
                found.append(Triple(t.attrs, x, x1 | t.y | z1, z))
    return TripleSet(t.attrs, found)
