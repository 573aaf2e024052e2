import pytest

from relolog.core import Gen, SignatureMismatch
from relolog.finrel import check_instance
from relolog.search import (
    MAX_PAIRS, SearchBudget, Truncated, enumerate_models, find_countermodel, search,
)
from relolog.text import parse_expr, parse_olog

ONE_REL = "type A\nrel R : A -> A\n"
TWO_RELS = "type A\nrel R : A -> A\nrel S : A -> A\n"


def models(text, bound):
    return [m for m in enumerate_models(parse_olog(text), SearchBudget(bound))]


def test_no_axioms_bound_one():
    ms = models(ONE_REL, 1)
    assert [m.relations["R"].pairs for m in ms] == [frozenset(), {("A1", "A1")}]


def test_trivial_axiom_filters_nothing():
    assert len(models(ONE_REL + "axiom R => R\n", 1)) == 2


def test_reflexivity_forces_diagonal():
    ms = models(ONE_REL + "axiom id(A) => R\n", 1)
    assert [m.relations["R"].pairs for m in ms] == [{("A1", "A1")}]


def test_first_countermodel():
    pres = parse_olog(TWO_RELS)
    result = search(pres, Gen("R"), Gen("S"), SearchBudget(1))
    m = result.countermodel
    assert m.carriers == {"A": ("A1",)}
    assert m.relations["R"].pairs == {("A1", "A1")} and not m.relations["S"].pairs
    assert result.witness == ("A1", "A1")


@pytest.mark.parametrize("bound", [1, 2])
def test_reflexive_conjecture_has_no_countermodel(bound):
    pres = parse_olog(TWO_RELS)
    assert find_countermodel(pres, Gen("R"), Gen("R"), SearchBudget(bound)) is None


def test_ancestor_need_not_be_parent(family):
    m = find_countermodel(family, Gen("ancestor"), Gen("parent"), SearchBudget(1))
    assert m.carriers == {"Person": ("Person1",)}
    assert not m.relations["parent"].pairs
    assert m.relations["ancestor"].pairs == {("Person1", "Person1")}


def test_grandparents_are_ancestors(family):
    result = search(family, parse_expr("grandparent", family), Gen("ancestor"), SearchBudget(3))
    assert not result.found and result.truncated is None
    assert result.models_checked > 0


def test_enumeration_is_deterministic_and_sound(family):
    a = list(enumerate_models(family, SearchBudget(2)))
    b = list(enumerate_models(family, SearchBudget(2)))
    assert a == b
    assert all(check_instance(m, family).ok for m in a)


def test_max_models_truncates():
    items = list(enumerate_models(parse_olog(ONE_REL), SearchBudget(2, max_models=3)))
    assert len(items) == 4 and items[-1] == Truncated("max_models")
    result = search(parse_olog(TWO_RELS), Gen("R"), Gen("R"), SearchBudget(2, max_models=5))
    assert result.truncated is not None and result.models_checked == 5


def test_too_many_pairs_truncates():
    big = MAX_PAIRS + 1
    items = list(enumerate_models(parse_olog(ONE_REL), SearchBudget(big)))
    assert isinstance(items[-1], Truncated)


def test_per_type_bounds():
    pres = parse_olog("type A, B\nrel R : A -> B\n")
    ms = list(enumerate_models(pres, SearchBudget({"A": 1, "B": 2})))
    assert {len(m.carriers["B"]) for m in ms} == {1, 2}
    assert {len(m.carriers["A"]) for m in ms} == {1}


def test_sides_must_share_a_signature():
    pres = parse_olog("type A, B\nrel R : A -> A\nrel S : A -> B\n")
    with pytest.raises(SignatureMismatch):
        search(pres, Gen("R"), Gen("S"), SearchBudget(1))


def test_empty_carriers_on_request():
    ms = list(enumerate_models(parse_olog(ONE_REL), SearchBudget(1, min_carrier=0)))
    assert len(ms) == 3 and ms[0].carriers == {"A": ()}
