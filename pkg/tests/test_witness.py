import pytest

from indepkit import rules as rl
from indepkit.errors import DomainError, PreconditionError
from indepkit.independence import scan_table, set_indep
from indepkit.triples import Triple, TripleSet, iter_triples, trivial_mask
from indepkit.witness import (
    LoopSpec,
    build_witness,
    dmin,
    dmin0_label,
    layer_preserves,
    loop_family,
    loop_order,
    preserved,
    set_distance,
    uncovered_targets,
    verify_materialized,
    verify_witness,
    held_table,
)


def test_spec_validation():
    with pytest.raises(DomainError):
        LoopSpec(2, 1)
    with pytest.raises(DomainError):
        LoopSpec(4, 5)


def test_loop_order():
    assert loop_order(LoopSpec(4, 2)) == ["b3", "b4", "b1", "b2"]
    assert loop_order(LoopSpec(3, 3)) == ["b1", "b2", "b3"]


def test_preserved_and_family():
    spec = LoopSpec(4, 2)
    p = preserved(spec)
    a = spec.attrs
    assert len(p) == 3
    assert Triple.of(a, "a", "b2", "b3") not in p
    assert Triple.of(a, "a", "b4", "b1") in p
    assert len(loop_family(3)) == 3


def test_distance():
    assert set_distance(0b0111, 0b1011) == 1
    assert set_distance(0b0011, 0b1111) == 2
    spec = LoopSpec(4, 2)
    a = spec.attrs
    p = preserved(spec)
    assert dmin(Triple.of(a, "a", "b2", "b1"), p) == 0
    assert dmin(Triple.of(a, "a", "b1", "b3"), p) == 1
    with pytest.raises(PreconditionError):
        dmin(Triple.of(a, "a", "b1", "b3"), TripleSet(a))


@pytest.mark.parametrize("n,i", [(3, 1), (3, 3), (4, 2), (4, 4), (5, 3), (6, 2)])
def test_witness_exact(n, i):
    plan = build_witness(LoopSpec(n, i))
    rep = verify_witness(plan)
    assert rep.ok, rep.summary()
    assert rep.summary() == "spurious: 0, missing: 0"
    assert rep.held == preserved(plan.spec)
    assert len(uncovered_targets(plan)) == 0


@pytest.mark.parametrize("n,i", [(3, 1), (4, 2), (5, 3)])
def test_every_layer_preserves(n, i):
    plan = build_witness(LoopSpec(n, i))
    assert all(layer_preserves(plan).values())
    p = preserved(plan.spec)
    for layer in plan.layers.layers[:3]:
        for t in p:
            assert set_indep(layer, t)


def test_every_target_destroyed_somewhere():
    plan = build_witness(LoopSpec(4, 2))
    p = preserved(plan.spec)
    n = len(plan.spec.attrs)
    killed = trivial_mask(n) & False
    for label in plan.labels:
        killed = killed | (plan.destroyed(label).table() & ~trivial_mask(n))
    for t in iter_triples(plan.spec.attrs):
        if not t.trivial:
            assert killed[t.index] == (t not in p), t


def test_materialized_matches_layers():
    plan = build_witness(LoopSpec(3, 1))
    assert (verify_materialized(plan) == held_table(plan)).all()


def test_dropping_dmin0_layer_makes_target_spurious():
    spec = LoopSpec(4, 2)
    plan = build_witness(spec)
    label = dmin0_label("b1", "b4")
    assert label in plan.labels
    rep = verify_witness(plan.without(label))
    assert Triple.of(spec.attrs, "a", "b1", "b4") in rep.spurious
    assert not rep.missing


def test_unknown_layer():
    with pytest.raises(DomainError):
        build_witness(LoopSpec(3, 1)).without("nope")


def test_small_triples_need_three_attributes():
    """Nonempty middle plus nonempty outsides forces at least three attributes."""
    spec = LoopSpec(4, 1)
    for t in iter_triples(spec.attrs):
        if not t.trivial and t.y:
            assert bin(t.union).count("1") >= 3


def test_loop_family_closure_profile():
    fam = loop_family(4)
    assert rl.check_closure(fam, rl.graphoid_rules() + [rl.get_rule("bin1")]) == []
    assert rl.check_closure(fam, ["loop1(4)"])


def test_witness_layers_are_sound_models():
    """The product of the layers is a real function set, so the graphoid rules hold on its scan."""
    plan = build_witness(LoopSpec(3, 1))
    held = TripleSet.from_table(plan.spec.attrs, scan_table(plan.layers))
    assert rl.check_closure(held, rl.graphoid_rules()) == []
