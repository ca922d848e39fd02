import pytest
from hypothesis import given
from hypothesis import strategies as st

from indepkit import formulas as fm
from indepkit.errors import PreconditionError, ResourceLimitError

C = fm.LiteralConjunction.of


@st.composite
def conjunctions(draw, nvars=6):
    vs = draw(st.lists(st.integers(0, nvars - 1), min_size=1, max_size=nvars, unique=True))
    signs = draw(st.lists(st.booleans(), min_size=len(vs), max_size=len(vs)))
    return C([v for v, s in zip(vs, signs) if s], [v for v, s in zip(vs, signs) if not s])


def test_phi():
    assert fm.phi(0) == C([0])
    assert fm.phi(2) == C([2], [0, 1])
    assert str(fm.phi(1)) == "¬p0 ∧ p1"


@pytest.mark.parametrize("k", [1, 2, 8, 32])
def test_phi_family_disjoint(k):
    assert fm.pairwise_disjoint(fm.phi_family(k))


def test_phi_family_models():
    fam = fm.phi_family(6)
    seen = set()
    for f in fam:
        ms = fm.models(f, 6)
        assert ms and not ms & seen
        seen |= ms


def test_disjoint_examples():
    assert fm.conj_disjoint(C([0]), C([], [0]))
    assert not fm.conj_disjoint(C([0]), C([1]))
    with pytest.raises(PreconditionError):
        fm.conj_disjoint(C([0], [0]), C([1]))


def test_consistent_disjunct():
    d = fm.DNF((C([0], [0]), C([1], [2]), C([3])))
    assert fm.consistent_disjunct(d) == C([1], [2])
    assert d.flagged == [0]
    assert fm.consistent_disjunct(fm.DNF((C([0], [0]),))) is None


@given(conjunctions(), conjunctions())
def test_syntactic_matches_models(a, b):
    assert fm.conj_disjoint(a, b) == fm.disjoint_by_models(a, b, 6)


@given(conjunctions(), conjunctions(), conjunctions())
def test_strengthening_keeps_disjointness(a, b, extra):
    """Adding literals to one side of a disjoint pair keeps it disjoint."""
    stronger = C(a.positives | extra.positives, a.negatives | extra.negatives)
    if fm.conj_disjoint(a, b) and stronger.consistent:
        assert fm.disjoint_by_models(stronger, b, 6)


def test_models_guards():
    with pytest.raises(ResourceLimitError):
        fm.models(C([0]), 21)
    with pytest.raises(PreconditionError):
        fm.models(C([5]), 3)


@pytest.mark.parametrize("m,i", [(m, i) for m in range(1, 5) for i in range(1, min(m, 3) + 1)])
def test_disjoint_families_within_bound(m, i):
    fam = fm.max_disjoint_family(m, i)
    assert fm.pairwise_disjoint(fam)
    assert all(len(c) == i for c in fam)
    assert len(fam) == 2**i <= fm.proof_bound(i)


def test_proof_bound():
    assert [fm.proof_bound(i) for i in range(1, 5)] == [2, 5, 16, 65]
