import os
import random

import pytest
from hypothesis import given, settings, strategies as st

from relolog import corpus
from relolog.core import Compose, Delete, Gen, Ob, infer_type
from relolog.finrel import eval_expr
from relolog.logic import (
    ALL_RULES, COHERENT_RULES, REGULAR_RULES, TypeMismatch, Prod, Basic, alpha_canonicalize,
    check_formation, check_proof, format_formula, format_sequent, interpret, interpret_term,
    parse_judgement, parse_proofs, parse_sequent, parse_term, random_model,
    round_trip, rules_used, sequent_holds, translate_to_logic, type_of,
)
from relolog.randgen import random_expr, random_instance, random_presentation
from relolog.text import parse_expr, parse_instance

from conftest import DATA

CORPORA = [("foaf", "foaf_theory", "foaf_map"), ("shapes", "shapes_theory", "shapes_map")]


def _proofs(name):
    return parse_proofs(corpus.read(f"{name}.proofs"))


def _malformed(kind):
    with open(os.path.join(DATA, f"malformed_{kind}.proofs"), encoding="utf-8") as fh:
        return parse_proofs(fh.read())


# -- syntax ----------------------------------------------------------------

def test_sequent_text_round_trip(foaf_theory):
    for ax in foaf_theory.axioms:
        assert parse_sequent(format_sequent(ax)) == ax


def test_formation(foaf_theory, shapes_theory):
    ctx, phi = parse_judgement("[x:Person, y:Person] knows(x, y)")
    check_formation(ctx.unsplit(), phi, foaf_theory)
    ctx, _ = parse_judgement("[x:Circle] true")
    with pytest.raises(TypeMismatch):
        type_of(ctx.unsplit(), parse_term("pi1(x)"), shapes_theory)
    ctx, _ = parse_judgement("[x:Circle * Square] true")
    t = type_of(ctx.unsplit(), parse_term("<pi2(x), pi1(x)>"), shapes_theory)
    assert t == Prod(Basic("Square"), Basic("Circle"))


def test_alpha_canonical_forms():
    a = alpha_canonicalize(*parse_judgement("[x:Person] exists y:Person. knows(x, y)"))
    b = alpha_canonicalize(*parse_judgement("[p:Person] exists w:Person. knows(p, w)"))
    assert a == b
    _, inner = alpha_canonicalize(
        *parse_judgement("[x:Person] exists y:Person. exists y:Person. knows(y, y)"))
    assert inner.var != inner.body.var
    assert inner.body.body.args[0].name == inner.body.var


# -- proofs ----------------------------------------------------------------

@pytest.mark.parametrize("name, thy, _", CORPORA)
def test_corpus_proofs_check(name, thy, _, request):
    theory = request.getfixturevalue(thy)
    for pname, proof in _proofs(name).items():
        result = check_proof(proof, theory)
        assert result.ok, f"{pname}: {result}"


def test_corpus_covers_every_rule():
    used = set()
    count = 0
    for name in ("foaf", "shapes"):
        for proof in _proofs(name).values():
            used |= rules_used(proof)
            count += 1
    assert count >= 15
    assert set(ALL_RULES) <= used
    assert "frobenius" in used and "case_cover" in used


@pytest.mark.parametrize("kind, thy", [("regular", "foaf_theory"), ("coherent", "shapes_theory")])
def test_malformed_proofs_name_their_rule(kind, thy, request):
    theory = request.getfixturevalue(thy)
    proofs = _malformed(kind)
    rules = REGULAR_RULES if kind == "regular" else COHERENT_RULES
    assert set(proofs) == set(rules)
    for rule, proof in proofs.items():
        result = check_proof(proof, theory)
        assert not result.ok
        root = [d for d in result.diagnostics if d.path == ()]
        assert root and root[0].rule == rule, str(result)


def test_frobenius_side_condition(foaf_theory):
    result = check_proof(_malformed("regular")["frobenius"], foaf_theory)
    assert "x ∉ Γ" in str(result.diagnostics[0])


def test_identity_and_cut(foaf_theory):
    proofs = _proofs("foaf")
    assert check_proof(proofs["knows_self"], foaf_theory).ok
    assert check_proof(proofs["friend_implies_true"], foaf_theory).ok


def test_disabling_frobenius_breaks_its_proof(foaf_theory):
    proof = _proofs("foaf")["frobenius_salary"]
    assert check_proof(proof, foaf_theory).ok
    result = check_proof(proof, foaf_theory, disabled_rules=("frobenius",))
    assert not result.ok and result.diagnostics[0].rule == "frobenius"


@pytest.mark.parametrize("name, thy, smap", CORPORA)
def test_proved_sequents_hold_in_random_models(name, thy, smap, request):
    theory = request.getfixturevalue(thy)
    pres, sm = request.getfixturevalue(smap)
    rng = random.Random(7)
    conclusions = [p.conclusion for p in _proofs(name).values()]
    for _ in range(10):
        inst = random_model(theory, pres, rng, bound=3, smap=sm)
        for seq in conclusions:
            assert sequent_holds(seq, theory, inst, pres, sm), format_sequent(seq)


# -- interpretation --------------------------------------------------------

def _interp(text, theory, smap):
    pres, sm = smap
    ctx, phi = parse_judgement(text)
    return interpret(ctx, phi, theory, pres, sm)


def test_interpret_examples(foaf_theory, foaf_map, foaf_inst):
    pres = foaf_map[0]
    assert _interp("[x:Person; y:Person] knows(x, y)", foaf_theory, foaf_map) == Gen("knows")
    assert _interp("[x:Person;] true", foaf_theory, foaf_map) == Delete(Ob("Person"))
    e = _interp("[x:Person; z:Person] exists y:Person. knows(x, y) & knows(y, z)",
                foaf_theory, foaf_map)
    got = eval_expr(e, foaf_inst, pres).pairs
    assert got == eval_expr(Compose((Gen("knows"), Gen("knows"))), foaf_inst, pres).pairs
    assert got == {(p, p) for p in ("P1", "P2", "P3", "P4")}


SHAPES_DATA = """\
type Shape = {s1}
type Circle = {c1, c2}
type Square = {q1, q2}
type Colour = {red}
rel "as circle" = {}
rel "as square" = {}
rel colour = {}
rel classify = {}
"""


def test_term_interpretations(shapes_theory, shapes_map):
    pres, sm = shapes_map
    inst = parse_instance(SHAPES_DATA, pres)
    ctx, _ = parse_judgement("[x:Circle] true")
    assert eval_expr(interpret_term(ctx, parse_term("x"), shapes_theory, pres, sm),
                     inst, pres).pairs == {("c1", "c1"), ("c2", "c2")}
    ctx, _ = parse_judgement("[x:Circle * Circle] true")
    swap = interpret_term(ctx, parse_term("<pi2(x), pi1(x)>"), shapes_theory, pres, sm)
    cs = ("c1", "c2")
    assert eval_expr(swap, inst, pres).pairs == {((a, b), (b, a)) for a in cs for b in cs}
    ctx, _ = parse_judgement("[x:Circle + Square] true")
    flip = interpret_term(
        ctx, parse_term("case(x; a:Circle. in2[Square + Circle](a); b:Square. in1[Square + Circle](b))"),
        shapes_theory, pres, sm)
    pairs = eval_expr(flip, inst, pres).pairs
    assert len(pairs) == 4
    assert all(x.index != y.index and x.value == y.value for x, y in pairs)


def test_translate_examples(foaf):
    ctx, f = translate_to_logic(Gen("works at"), foaf)
    assert format_formula(f) == '"works at"(x0, x1)' and ctx.split == 1
    _, f = translate_to_logic(parse_expr('compose(knows, "works at")', foaf), foaf)
    assert format_formula(f) == 'exists x2:Person. knows(x0, x2) & "works at"(x2, x1)'
    ctx, f = translate_to_logic(parse_expr("copy(Person)", foaf), foaf)
    assert format_formula(f) == "x0 = x1 & x0 = x2" and ctx.split == 1


@settings(max_examples=40)
@given(st.integers(0, 100_000), st.booleans())
def test_round_trip_preserves_meaning(seed, distributive):
    rng = random.Random(seed)
    pres = random_presentation(rng, distributive=distributive)
    inst = random_instance(pres, rng, max_carrier=3)
    e = random_expr(pres, rng, depth=3)
    back = round_trip(e, pres)
    assert infer_type(back, pres) == infer_type(e, pres)
    assert eval_expr(back, inst, pres).pairs == eval_expr(e, inst, pres).pairs
