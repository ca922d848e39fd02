import itertools
from fractions import Fraction

import numpy as np
import pytest
from conftest import cube, subset_set
from hypothesis import given
from strategies import function_sets

from indepkit import rules as rl
from indepkit.errors import DomainError, PreconditionError, ResourceLimitError
from indepkit.funcset import AttributeSet, FunctionSet
from indepkit.independence import RationalMeasure, scan_table, set_indep_naive, uniform_measure
from indepkit.triples import Triple, TripleSet, full_tripleset, iter_triples
from indepkit.witness import loop_family

XYZ = AttributeSet.of("xyz")
XYZW = AttributeSet.of("xyzw")
U = FunctionSet.from_strings(XYZW, ["1111", "0100"])


def T(attrs, x, y, z):
    return Triple.of(attrs, x, y, z)


def naive_violations(rule, sigma):
    """Instantiate the schema by brute force over attribute-to-variable maps."""
    attrs = sigma.attrs
    k = len(rule.variables)
    out = set()
    for assign in itertools.product(range(k + 1), repeat=len(attrs)):
        masks = [0] * k
        for i, v in enumerate(assign):
            if v:
                masks[v - 1] |= 1 << i

        def tr(pattern):
            parts = []
            for part in pattern:
                m = 0
                for v in part:
                    m |= masks[v]
                parts.append(m)
            return Triple(attrs, *parts)

        concl = tr(rule.conclusion)
        if concl.trivial:
            continue
        if all(set_indep_naive(sigma, tr(p)) for p in rule.premises) and not set_indep_naive(sigma, concl):
            out.add(tuple(masks))
    return out


class TestSchemas:
    def test_aliases(self):
        assert rl.get_rule("e").name == "intersection"
        assert rl.get_rule("loop1_4") == rl.get_rule("loop1(4)")
        assert len(rl.get_rule("loop2").premises) == 7

    def test_loop1_one_rejected(self):
        with pytest.raises(DomainError):
            rl.get_rule("loop1(1)")

    def test_unknown(self):
        with pytest.raises(DomainError):
            rl.get_rule("frobnicate")

    def test_instance_limit(self):
        with pytest.raises(ResourceLimitError):
            rl.instances(rl.get_rule("loop2"), 9)


class TestSemantic:
    def test_intersection_counterexample(self):
        viol = rl.check_rule_semantic("intersection", U)
        assert len(viol) == 30  # frozen; matches the brute-force instantiation below
        named = [v for v in viol if v.render() == "x(yw)z, x(yz)w => x(y)(zw)"]
        assert named and named[0].recheck()
        assert {v.instantiation for v in viol} == naive_violations(rl.get_rule("intersection"), U)

    def test_u_triples(self):
        table = scan_table(U)
        assert table[T(XYZW, "x", "yw", "z").index]
        assert table[T(XYZW, "x", "yz", "w").index]
        assert not table[T(XYZW, "x", "y", "zw").index]

    def test_graphoid_holds_on_u(self):
        for r in rl.graphoid_rules():
            assert rl.check_rule_semantic(r, U) == []

    @pytest.mark.parametrize("name", ["symmetry", "decomposition", "weak-union", "contraction", "empty-outside", "bin1", "loop1(3)"])
    def test_batch_matches_naive_on_samples(self, name):
        rule = rl.get_rule(name)
        rng = np.random.default_rng(7)
        for _ in range(15):
            s = FunctionSet(XYZ, cube(3)[rng.random(8) < 0.5], (0, 1))
            if len(s):
                found = {v.instantiation for v in rl.check_rule_semantic(rule, s)}
                assert found == naive_violations(rule, s) == set()

    @given(function_sets(min_n=3, max_n=5, max_rows=10))
    def test_scan_is_closed(self, sigma):
        t = rl.scan_triples(sigma)
        assert rl.check_closure(t, rl.graphoid_rules()) == []

    @pytest.mark.slow
    def test_soundness_four_attributes_exhaustive(self):
        tables = np.array([scan_table(subset_set(XYZW, b)) for b in range(1, 1 << 16, 7)])
        for name in [*rl.GRAPHOID, "empty-outside", "bin1", "bin2", "loop1(3)", "loop1(4)", "loop2"]:
            assert rl.count_violations_batch(rl.get_rule(name), tables, 4).sum() == 0

    def test_random_soundness_up_to_seven(self, rng):
        for _ in range(60):
            n = int(rng.integers(3, 8))
            attrs = AttributeSet(tuple("abcdefg"[:n]))
            rows = cube(n)[rng.random(2**n) < rng.uniform(0.05, 0.6)]
            if not len(rows):
                continue
            table = scan_table(FunctionSet(attrs, rows, (0, 1)))
            for r in rl.graphoid_rules():
                assert len(rl.violating_rows(r, table, n)) == 0


class TestProb:
    def test_uniform_graphoid(self):
        for bits in range(1, 256):
            p = uniform_measure(subset_set(XYZ, bits))
            for r in rl.graphoid_rules():
                assert rl.check_rule_prob(r, p) == []

    def test_intersection_with_zeros(self):
        viol = rl.check_rule_prob("intersection", uniform_measure(U))
        assert viol and all(v.recheck() for v in viol)

    def test_strictly_positive_intersection(self, rng):
        c = cube(3)
        for _ in range(30):
            w = [int(v) for v in rng.integers(1, 30, size=8)]
            p = RationalMeasure(FunctionSet(XYZ, c, (0, 1)), tuple(Fraction(v, sum(w)) for v in w))
            assert rl.check_rule_prob("intersection", p) == []


class TestClosure:
    def test_full_set_closed(self):
        assert rl.check_closure(full_tripleset(XYZW), rl.rules(rl.rule_names()[:6])) == []

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_loop_family(self, n):
        fam = loop_family(n)
        ok_rules = rl.graphoid_rules() + [rl.get_rule("bin1")] + [rl.get_rule(f"loop1({k})") for k in range(2, n)]
        assert rl.check_closure(fam, ok_rules) == []
        viol = rl.check_closure(fam, [f"loop1({n})"])
        assert len(viol) == n
        want = {"A": ("a",), **{f"B{k}": (f"b{k}",) for k in range(1, n + 1)}}
        assert any(v.binding() == want for v in viol)

    def test_close_reaches_fixpoint(self):
        t = TripleSet(XYZW, [T(XYZW, "x", "y", "zw")])
        closed = rl.close(t)
        assert rl.check_closure(closed, rl.GRAPHOID) == []
        assert T(XYZW, "x", "yz", "w") in closed and T(XYZW, "x", "y", "z") in closed

    def test_single_triple_consequences_are_closure(self):
        t = T(XYZW, "x", "y", "zw")
        assert rl.single_triple_consequences(t) == rl.close(TripleSet(XYZW, [t]), ["symmetry", "decomposition", "weak-union"])


class TestSearch:
    def test_intersection_found(self):
        res = rl.search("intersection", 4, 4)
        assert res.sigma is not None and res.violation.recheck()
        assert res.sigma.rows.tolist() == [[0, 0, 0], [1, 1, 1]]

    def test_decomposition_none(self):
        assert rl.search_counterexample("decomposition", 3, 8) is None

    def test_loop1_small(self):
        assert rl.search_counterexample("loop1(3)", 4, 3) is None

    def test_budget_and_resume(self):
        first = rl.search("intersection", 4, 4, budget=10)
        assert first.sigma is None and first.examined == 10
        rest = rl.search("intersection", 4, 4, start=first.cursor)
        assert rest.sigma == rl.search_counterexample("intersection", 4, 4)


class TestSigmaMu:
    def test_all_triples(self):
        assert len(rl.sigma_mu(full_tripleset(XYZ))) == 0

    def test_minimality_direct(self, rng):
        for _ in range(30):
            s = FunctionSet(XYZW, cube(4)[rng.random(16) < 0.4], (0, 1))
            if not len(s):
                continue
            t = rl.scan_triples(s)
            for m in rl.sigma_mu(t):
                assert m not in t
                for i in range(4):
                    if m.x >> i & 1:
                        assert Triple(XYZW, m.x & ~(1 << i), m.y, m.z) in t
                    if m.z >> i & 1:
                        assert Triple(XYZW, m.x, m.y, m.z & ~(1 << i)) in t

    def test_diagonal_minima(self):
        t = rl.scan_triples(FunctionSet.from_strings(XYZ, ["000", "111"]))
        mu = rl.sigma_mu(t)
        assert T(XYZ, "x", (), "z") in mu and T(XYZ, "x", (), "y") in mu

    def test_every_failure_dominates_a_minimum(self, rng):
        for _ in range(30):
            s = FunctionSet(XYZW, cube(4)[rng.random(16) < 0.4], (0, 1))
            if not len(s):
                continue
            t = rl.scan_triples(s)
            mu = list(rl.sigma_mu(t))
            for f in iter_triples(XYZW):
                if f.trivial or f in t:
                    continue
                assert any(
                    (m.y == f.y and m.x & ~f.x == 0 and m.z & ~f.z == 0)
                    or (m.y == f.y and m.z & ~f.x == 0 and m.x & ~f.z == 0)
                    for m in mu
                )


class TestFuncComplic:
    def test_closed_relations_exhaustive(self):
        for bits in range(0, 256):
            s = subset_set(XYZ, bits) if bits else FunctionSet(XYZ, [], (0, 1))
            t = rl.close(rl.scan_triples(s))
            assert rl.func_complic_check(t) == []
            assert rl.func_complic_check(t, split_middle=False) == []

    def test_four_attributes_sample(self, rng):
        for _ in range(40):
            s = FunctionSet(XYZW, cube(4)[rng.random(16) < 0.4], (0, 1))
            assert rl.func_complic_check(rl.close(rl.scan_triples(s))) == []

    def test_full_relation(self):
        assert rl.func_complic_check(full_tripleset(XYZ)) == []

    def test_removed_conclusion_detected(self):
        t = rl.close(rl.scan_triples(FunctionSet.from_strings(XYZW, ["0000", "1111"])))
        victim = T(XYZW, "x", "y", "z")  # follows from x(y)(zw) by decomposition
        assert victim in t
        broken = t - TripleSet(XYZW, [victim])
        with pytest.raises(PreconditionError, match="not closed"):
            rl.func_complic_check(broken)

    def test_added_rearrangement_detected(self):
        t = rl.close(rl.scan_triples(FunctionSet.from_strings(XYZ, ["001", "010"])))
        m = T(XYZ, "z", "x", "y")
        assert m in rl.sigma_mu(t)
        extra = T(XYZ, "xz", (), "y")  # the middle x moved to the left
        assert extra in set(rl.complic_rearrangements(m)) and extra not in t
        mutant = t | TripleSet(XYZ, [extra])
        assert rl.func_complic_check(mutant, require_closed=False)

    def test_empty_core_excluded(self):
        """Moving every outer attribute across (X or Z empty in the result core) is not a rearrangement."""
        m = T(XYZ, "z", "x", "y")
        assert T(XYZ, "z", "y", "x") not in set(rl.complic_rearrangements(m))
