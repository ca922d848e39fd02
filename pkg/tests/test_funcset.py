import itertools
import warnings

import numpy as np
import pytest
from conftest import cube, subset_set
from hypothesis import given
from hypothesis import strategies as st
from strategies import function_sets

from indepkit.errors import DegenerateConstructionWarning, DomainError, PreconditionError
from indepkit.funcset import (
    AttributeSet,
    Assignment,
    FunctionSet,
    LayeredFunctionSet,
    all_but,
    assignment_from,
    compose_layers,
    constant_set,
    fragment,
    pair_set,
    parity_set,
    project,
    restrict,
)
from indepkit.independence import set_indep
from indepkit.triples import iter_triples

ABCDE = AttributeSet.of("ABCDE")


def rows_of(sigma):
    return {"".join(map(str, r)) for r in sigma.rows}


class TestAttributesAndFragments:
    def test_duplicate_names_rejected(self):
        with pytest.raises(DomainError):
            AttributeSet(("x", "x"))

    def test_of_accepts_strings_and_lists(self):
        assert AttributeSet.of("xyz").names == ("x", "y", "z")
        assert AttributeSet.of("b1, b2").names == ("b1", "b2")

    def test_restrict_r3_values(self):
        sigma = Assignment(ABCDE, (0, 0, 0, 0, 0))
        tau = Assignment(ABCDE, (1, 0, 1, 1, 1))
        assert restrict(sigma, "AB").as_dict() == {"A": 0, "B": 0}
        assert restrict(tau, "B").as_dict() == {"B": 0}
        assert restrict(sigma, []).values == ()

    def test_restrict_unknown_attribute(self):
        with pytest.raises(DomainError):
            restrict(Assignment(ABCDE, (0,) * 5), "Q")

    @given(st.lists(st.integers(0, 2), min_size=5, max_size=5), st.integers(0, 31), st.integers(0, 31))
    def test_restriction_composes(self, vals, s, sub):
        f = Assignment(ABCDE, tuple(vals))
        sub &= s
        assert restrict(f, ABCDE.subset(s)).restrict(ABCDE.subset(sub)) == restrict(f, ABCDE.subset(sub))


class TestProject:
    def test_small(self):
        s = FunctionSet.from_strings("xyz", ["000", "111"])
        assert {f.values for f in project(s, "x")} == {(0,), (1,)}

    def test_change_rel_first_two(self):
        s = FunctionSet.from_strings("xabcdz", ["111111", "011110", "011101", "111100", "110111", "010000"])
        assert {f.values for f in project(s, "xa")} == {(1, 1), (0, 1)}

    def test_identity(self):
        s = FunctionSet.from_strings("xyz", ["010", "111", "100"])
        assert {f.values for f in project(s, "xyz")} == {tuple(r) for r in s.rows}

    @given(function_sets(alphabet=(0, 1, 2)), st.data())
    def test_cardinality_bounds(self, sigma, data):
        mask = data.draw(st.integers(0, sigma.attrs.full))
        proj = project(sigma, sigma.attrs.subset(mask))
        assert len(proj) <= len(sigma)
        assert len(proj) <= len(sigma.alphabet) ** bin(mask).count("1")


class TestGenerators:
    def test_parity(self):
        ab = AttributeSet.of("ab")
        assert rows_of(parity_set(ab, "ab")) == {"00", "11"}
        assert rows_of(parity_set(AttributeSet.of("abc"), "ab")) == {"000", "001", "110", "111"}

    def test_parity_needs_two(self):
        with pytest.raises(PreconditionError):
            parity_set(AttributeSet.of("abc"), "a")

    @pytest.mark.parametrize("n", range(2, 6))
    def test_parity_half(self, n):
        attrs = AttributeSet(tuple("abcde"[:n]))
        for k in range(2, n + 1):
            for x in itertools.combinations(attrs.names, k):
                assert len(parity_set(attrs, x)) == 2 ** (n - 1)

    def test_constant(self):
        assert rows_of(constant_set(AttributeSet.of("xyz"))) == {"000", "111"}

    def test_pair(self):
        xay = AttributeSet.of("xay")
        assert rows_of(pair_set(xay, assignment_from(xay, 1, a=0))) == {"000", "101"}
        assert pair_set(xay, (1, 1, 1)) == constant_set(xay)

    def test_pair_zero_warns(self):
        xay = AttributeSet.of("xay")
        with pytest.warns(DegenerateConstructionWarning):
            s = pair_set(xay, (0, 0, 0))
        assert len(s) == 1

    def test_all_but(self):
        ayz = AttributeSet.of("ayz")
        s = all_but(ayz, {"a": 0, "y": 0, "z": 0})
        assert len(s) == 7 and (0, 0, 0) not in s

    def test_all_but_empty_support(self):
        with pytest.warns(DegenerateConstructionWarning):
            assert len(all_but(AttributeSet.of("xy"), {})) == 0


class TestCompose:
    def test_two_by_two(self):
        xy = AttributeSet.of("xy")
        s = compose_layers([FunctionSet.from_strings(xy, ["00", "11"]), FunctionSet.from_strings(xy, ["00", "01"])])
        assert len(s) == 4

    def test_single_layer_is_identity_up_to_encoding(self):
        s = FunctionSet.from_strings("xyz", ["010", "111"])
        assert compose_layers([s]) == s

    def test_empty_layer(self):
        xy = AttributeSet.of("xy")
        with pytest.raises(PreconditionError):
            compose_layers([FunctionSet(xy, []), constant_set(xy)])

    def test_layer_transfer_exhaustive_small(self):
        """A triple holds in the product iff it holds in every layer (|I|=3)."""
        attrs = AttributeSet.of("xyz")
        sets = [subset_set(attrs, b) for b in range(1, 256) if bin(b).count("1") <= 3]
        triples = list(iter_triples(attrs))
        rng = np.random.default_rng(3)
        for _ in range(200):
            a, b = (sets[k] for k in rng.integers(0, len(sets), size=2))
            prod = compose_layers([a, b])
            layered = LayeredFunctionSet((a, b))
            for t in triples:
                assert set_indep(prod, t) == (set_indep(a, t) and set_indep(b, t)) == set_indep(layered, t)

    @pytest.mark.slow
    def test_layer_transfer_four_attributes(self):
        attrs = AttributeSet.of("xyzw")
        c = cube(4)
        rng = np.random.default_rng(4)
        triples = list(iter_triples(attrs))
        for _ in range(150):
            layers = []
            for _ in range(2):
                k = int(rng.integers(1, 5))
                layers.append(FunctionSet(attrs, c[rng.choice(16, size=k, replace=False)], (0, 1)))
            prod = compose_layers(layers)
            for t in triples:
                assert set_indep(prod, t) == all(set_indep(l, t) for l in layers)


class TestFunctionSet:
    def test_dedup_and_order(self):
        s = FunctionSet.from_strings("xy", ["11", "00", "11"])
        assert s.rows.tolist() == [[0, 0], [1, 1]]

    def test_alphabet_violation(self):
        with pytest.raises(DomainError):
            FunctionSet(AttributeSet.of("xy"), [[0, 2]], (0, 1))

    def test_fragment_helper(self):
        f = fragment(AttributeSet.of("xyz"), {"z": 1, "x": 0})
        assert f.support == ("x", "z") and f.values == (0, 1)

    def test_contains(self):
        s = FunctionSet.from_strings("xy", ["01"])
        assert (0, 1) in s and (1, 0) not in s

    def test_no_warning_on_normal_construction(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            constant_set(AttributeSet.of("xy"))
