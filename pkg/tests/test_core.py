import random

import pytest
from hypothesis import given, strategies as st

from relolog.core import (
    Axiom, CompositionMismatch, Compose, Copy, Dagger, Gen, I, Id, Meet, Merge, Ob,
    Tensor, UnknownGenerator, desugar, equality_axioms, generators_of, infer_type,
    is_core, normalize_strict, validate_presentation,
)
from relolog.finrel import eval_expr
from relolog.randgen import random_expr, random_presentation
from relolog.text import parse_expr, print_olog, parse_olog

P, ORG = Ob("Person"), Ob("Organization")


def test_generator_type(foaf):
    assert infer_type(Gen("friend of"), foaf) == (P, P)


def test_identity_on_unit(foaf):
    assert infer_type(Id(I), foaf) == (I, I)


def test_compose_chains_signatures(foaf):
    e = Compose((Gen("friend of"), Gen("works at")))
    assert infer_type(e, foaf) == (P, ORG)


def test_bad_composite_and_unknown_name(foaf):
    with pytest.raises(CompositionMismatch):
        infer_type(Compose((Gen("works at"), Gen("knows"))), foaf)
    with pytest.raises(UnknownGenerator):
        infer_type(Gen("hates"), foaf)


def test_meet_desugars_to_copy_tensor_merge(foaf):
    r, s = Gen("knows"), Gen("friend of")
    assert desugar(Meet(r, s), foaf) == Compose((Copy(P), Tensor((r, s)), Merge(P)))
    assert desugar(Gen("knows"), foaf) == Gen("knows")


def test_desugared_dagger_is_transpose(foaf, foaf_inst):
    r = Gen("works at")
    d = desugar(Dagger(r), foaf)
    assert is_core(d)
    got = eval_expr(d, foaf_inst, foaf).pairs
    assert got == {(y, x) for x, y in foaf_inst.relations["works at"].pairs}


def test_normalize_strict_examples():
    f, g, h = Gen("f"), Gen("g"), Gen("h")
    assert normalize_strict(Compose((Compose((f, g)), h))) == Compose((f, g, h))
    assert normalize_strict(Compose((f, Id(Ob("Y"))))) == f
    assert normalize_strict(Tensor((f, Id(I)))) == f


def test_foaf_validates(foaf):
    assert validate_presentation(foaf).ok


def test_mismatched_axiom_is_reported(foaf):
    bad = foaf.with_axioms(foaf.axioms + (Axiom(Gen("friend of"), Gen("works at")),))
    report = validate_presentation(bad)
    assert not report.ok
    assert len(report.errors) == 1
    assert "codomain" in report.errors[0].message


def test_equality_is_two_subsumptions(foaf):
    axs = equality_axioms(Gen("knows"), Dagger(Gen("knows")))
    assert len(axs) == 2
    assert axs[0].lhs == axs[1].rhs
    assert validate_presentation(foaf.with_axioms(axs)).ok


def test_parsed_axiom_with_wrong_sides_fails_validation():
    pres = parse_olog("type A, B\nrel r : A -> B\naxiom r => id(A)\n")
    assert [e.kind for e in validate_presentation(pres).errors] == ["axiom"]


def test_olog_print_parse_round_trip(foaf):
    again = parse_olog(print_olog(foaf))
    assert again.relation_generators == foaf.relation_generators
    assert again.axioms == foaf.axioms


def test_definitions_expand(foaf):
    e = parse_expr('"grandparent of"', foaf)
    assert infer_type(e, foaf) == (P, P)
    assert generators_of(e) == {"child of"}


@given(st.integers(0, 10_000), st.booleans())
def test_rewrites_preserve_type(seed, distributive):
    rng = random.Random(seed)
    pres = random_presentation(rng, distributive=distributive)
    e = random_expr(pres, rng, depth=4)
    t = infer_type(e, pres)
    assert infer_type(desugar(e, pres), pres) == t
    assert infer_type(normalize_strict(e), pres) == t
    assert is_core(desugar(e, pres))
    assert normalize_strict(normalize_strict(e)) == normalize_strict(e)
