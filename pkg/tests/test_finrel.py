import random

from hypothesis import given, strategies as st

from relolog.core import Compose, Copy, Gen, Id, Meet, Ob
from relolog.finrel import (
    FinRelation, check_instance, classify_map, empty_instance, eval_expr, subsumes,
    subsumption_witness,
)
from relolog.randgen import random_expr, random_instance, random_presentation

P = Ob("Person")
PEOPLE = ("P1", "P2", "P3", "P4")


def test_generator_table(foaf, foaf_inst):
    assert eval_expr(Gen("friend of"), foaf_inst, foaf).pairs == {("P1", "P2"), ("P2", "P1")}


def test_composite_goes_through_a_middle_person(foaf, foaf_inst):
    got = eval_expr(Compose((Gen("friend of"), Gen("knows"))), foaf_inst, foaf).pairs
    # by hand: x friend-of y and y knows z, for every middle y
    fr, kn = foaf_inst.relations["friend of"].pairs, foaf_inst.relations["knows"].pairs
    oracle = {(x, z) for x, y in fr for y2, z in kn if y == y2}
    assert got == oracle == {("P1", "P1"), ("P2", "P2")}


def test_identity_is_diagonal(foaf, foaf_inst):
    assert eval_expr(Id(P), foaf_inst, foaf).pairs == {(p, p) for p in PEOPLE}


def test_meet_is_intersection(foaf, foaf_inst):
    got = eval_expr(Meet(Gen("knows"), Gen("friend of")), foaf_inst, foaf).pairs
    assert got == foaf_inst.relations["knows"].pairs & foaf_inst.relations["friend of"].pairs


def test_foaf_instance_satisfies_axioms(foaf, foaf_inst):
    report = check_instance(foaf_inst, foaf)
    assert report.ok and report.checked == len(foaf.axioms)


def test_one_sided_friend_row_is_caught(foaf, foaf_inst):
    rel = foaf_inst.relations["friend of"]
    inst = foaf_inst.with_relation("friend of", FinRelation(P, P, rel.pairs | {("P3", "P1")}))
    report = check_instance(inst, foaf)
    by_axiom = {(v.axiom.lhs, v.axiom.rhs): v.witness for v in report.violations}
    assert by_axiom[(Gen("friend of"), Gen("knows"))] == ("P3", "P1")


def test_empty_instance_is_vacuous(foaf, family, shapes):
    for pres in (foaf, family):
        assert check_instance(empty_instance(pres), pres).ok


def test_subsumes(foaf, foaf_inst):
    assert subsumes(foaf_inst, Gen("friend of"), Gen("knows"), foaf)
    assert not subsumes(foaf_inst, Gen("knows"), Gen("friend of"), foaf)
    assert subsumption_witness(foaf_inst, Gen("knows"), Gen("friend of"), foaf) == ("P3", "P4")
    assert subsumes(foaf_inst, Gen("salary"), Gen("salary"), foaf)


def test_age_is_an_injective_function(foaf_inst):
    kind = classify_map(foaf_inst.relations["age"], foaf_inst.carriers)
    assert kind.is_function and kind.injective
    # Number also holds the salaries, so nobody is aged 30000
    assert not kind.surjective


def test_empty_relation_is_partial():
    kind = classify_map(FinRelation(P, P, frozenset()), {"Person": PEOPLE})
    assert kind.partial_function and not kind.total


def test_copy_is_injective_function(foaf, foaf_inst):
    kind = classify_map(eval_expr(Copy(P), foaf_inst, foaf), foaf_inst.carriers)
    assert kind.is_function and kind.injective


@given(st.integers(0, 10_000))
def test_subsumption_is_reflexive(seed):
    rng = random.Random(seed)
    pres = random_presentation(rng, distributive=rng.random() < 0.5)
    inst = random_instance(pres, rng, max_carrier=3)
    e = random_expr(pres, rng, depth=3)
    assert subsumes(inst, e, e, pres)
