import itertools

import numpy as np
import pytest

from indepkit import prooftree as pt
from indepkit.errors import ConstructionError, DomainError
from indepkit.funcset import AttributeSet, FunctionSet
from indepkit.independence import scan_table
from indepkit.rules import single_triple_consequences
from indepkit.triples import Triple, TripleSet

ABCDE = AttributeSet.of("ABCDE")


def T(x, y, z, attrs=ABCDE):
    return Triple.of(attrs, x, y, z)


@pytest.mark.parametrize("name", sorted(pt.EXAMPLES))
def test_examples_accepted(name):
    ex = pt.EXAMPLES[name]()
    res = pt.check_derivation(ex.premises, ex.conclusion, ex.root)
    assert res, res.reason


def test_r3_generic_values():
    assert pt.example_r3().rendered() == ["00000", "10111", "00122", "03113", "04411", "00551"]


def test_universal_pair_rendering():
    s, t = pt.universal_pair(ABCDE, "B")
    assert pt.render(s, "B") == "00000" and pt.render(t, "B") == "10111"
    assert pt.render(t, "ABCDE") == "00000"
    assert pt.render(t, 0) == "11111"


def test_combine_steps():
    s, t = pt.universal_pair(ABCDE, "B")
    r1 = pt.combine(s, t, T("A", "B", "C"), 1)
    assert pt.render(r1, "B") == "00122"
    assert r1.prereq == ABCDE.mask("B")
    r2 = pt.combine(r1, t, T("A", "C", "D"), 2)
    assert pt.render(r2, "B") == "03113"
    assert r2.prereq == ABCDE.mask("B")  # C agrees by construction


def test_no_agreement_raises():
    s, t = pt.universal_pair(ABCDE)
    r1 = pt.combine(s, t, T("A", "B", "C"), 1)
    with pytest.raises(ConstructionError):
        pt.combine(r1, t, T("A", "D", "C"), 2)  # D is fresh in r1, τ's in t


def test_reused_default_rejected():
    s, t = pt.universal_pair(ABCDE)
    r1 = pt.combine(s, t, T("A", "B", "C"), 1)
    with pytest.raises(ConstructionError):
        pt.combine(r1, t, T("A", "C", "D"), 1)


def test_fresh_defaults_distinct():
    for build in pt.EXAMPLES.values():
        ks = [n.k for n in build().root.nodes()]
        assert len(ks) == len(set(ks))


def test_r1_interpretations():
    ex = pt.example_r1()
    a = ex.root.attrs
    got = pt.conclusions(ex.root)
    for t in [("A", "B", "CD"), ("A", "BC", "D"), ("A", "BD", "C")]:
        assert Triple.of(a, *t) in got


def test_r3_intermediate_has_no_conclusion():
    ex = pt.example_r3()
    assert len(pt.conclusions(ex.steps[1])) == 0
    assert pt.interpret(ex.steps[1]) == []


def test_leaf_has_no_tau_side():
    s, _ = pt.universal_pair(ABCDE)
    assert len(pt.conclusions(s)) == 0


def test_mutated_conclusion_rejected():
    ex = pt.example_r3()
    res = pt.check_derivation(ex.premises, T("A", (), "E"), ex.root)
    assert not res and "does not yield" in res.reason


def test_unavailable_premise_rejected():
    ex = pt.example_r3()
    res = pt.check_derivation(ex.premises[:3], ex.conclusion, ex.root)
    assert not res and "not available" in res.reason


def test_loop1_simple_search():
    prem = [T("A", "B", "C"), T("A", "C", "D"), T("A", "D", "E"), T("A", "E", "B")]
    assert T("A", "B", "E") in pt.search_derivations(prem, 4)
    assert pt.find_derivation(prem, T("A", "B", "E"), 4) is not None


def test_single_premise_gives_its_consequences():
    t = T("AB", "C", "DE")
    assert pt.search_derivations([t], 3) == single_triple_consequences(t)


def test_no_premises():
    assert len(pt.search_derivations([], 3, attrs=ABCDE)) == 0
    with pytest.raises(DomainError):
        pt.search_derivations([], 3)


def test_search_is_sound(rng):
    """Every derived triple holds on random sets satisfying the premises."""
    prem = [T("A", "B", "C"), T("A", "C", "D"), T("A", "D", "E"), T("A", "E", "B")]
    found = pt.search_derivations(prem, 4)
    cube = np.array(list(itertools.product((0, 1), repeat=5)))
    checked = 0
    for _ in range(3000):
        rows = cube[rng.choice(32, size=int(rng.integers(1, 7)), replace=False)]
        tab = scan_table(FunctionSet(ABCDE, rows, (0, 1)))
        if all(tab[p.index] for p in prem):
            checked += 1
            assert all(tab[t.index] for t in found)
    assert checked > 500


def test_r2_is_bin1():
    ex = pt.example_r2()
    a = ex.root.attrs
    assert ex.conclusion == Triple.of(a, "X", "YV", "Z")
    assert TripleSet(a, ex.premises) == TripleSet(a, [Triple.of(a, "X", "Y", "Z"), Triple.of(a, "X", "V", "Z"), Triple.of(a, "Y", "XZ", "V")])
