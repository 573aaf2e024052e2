import json
import os
import random

import pytest
from hypothesis import given, strategies as st

from relolog.core import Compose, Gen, Meet, Ob, normalize_strict
from relolog.export import (
    ExportError, FoldConflict, UnsupportedFormat, attribute_types, category_of_elements,
    diagram, export_dot, export_sql, foldable, import_sql, render_diagram,
)
from relolog.finrel import empty_instance
from relolog.randgen import random_expr, random_instance, random_presentation
from relolog.text import parse_instance, parse_olog

from conftest import GOLDEN


def _golden(*parts):
    with open(os.path.join(GOLDEN, *parts), encoding="utf-8") as fh:
        return fh.read()


def _rows(csv_text):
    return len(csv_text.splitlines()) - 1


# -- SQL -------------------------------------------------------------------

def test_table_sizes(foaf, foaf_inst):
    _, tables = export_sql(foaf_inst, foaf)
    sizes = {t: _rows(tables[t]) for t in ("Person", "Organization", "friend of", "knows", "salary")}
    assert sizes == {"Person": 4, "Organization": 2, "friend of": 2, "knows": 4, "salary": 2}
    assert tables["friend of"].splitlines()[0] == "Person 1,Person 2"
    assert tables["salary"].splitlines()[0] == "Person,Organization,Number"


@pytest.mark.parametrize("fold, folder", [(False, "foaf_sql"), (True, "foaf_sql_folded")])
def test_sql_golden(foaf, foaf_inst, fold, folder):
    ddl, tables = export_sql(foaf_inst, foaf, fold_maps=fold)
    assert ddl == _golden(folder, "schema.sql")
    files = sorted(f[:-4] for f in os.listdir(os.path.join(GOLDEN, folder)) if f.endswith(".csv"))
    assert sorted(tables) == files
    for name, text in tables.items():
        assert text == _golden(folder, f"{name}.csv"), name


def test_folded_person_table(foaf, foaf_inst):
    assert attribute_types(foaf) == {"Number", "String"}
    assert foldable(foaf_inst, foaf) == ["age", "family name", "given name"]
    _, tables = export_sql(foaf_inst, foaf, fold_maps=True)
    lines = tables["Person"].splitlines()
    assert lines[0] == "ID,age,family name,given name"
    assert lines[1] == "P1,21,Doe,Alice"
    assert "age" not in tables


def test_fold_conflicts(foaf_inst):
    pres = parse_olog('type Person, Number\nrel ID : Person -> Number\nrel age : Person -> Number\n')
    inst = parse_instance("type Person = {P1}\ntype Number = {1}\n"
                          "rel ID = {(P1,1)}\nrel age = {(P1,1)}\n", pres)
    with pytest.raises(FoldConflict):
        export_sql(inst, pres, fold_maps=["ID"])
    with pytest.raises(FoldConflict):
        export_sql(inst, pres, fold_maps=["age", "age"])


def test_folding_a_multivalued_relation_is_refused():
    pres = parse_olog("type Person, Number\nrel age : Person -> Number\n")
    inst = parse_instance("type Person = {P1}\ntype Number = {1, 2}\n"
                          "rel age = {(P1,1), (P1,2)}\n", pres)
    assert foldable(inst, pres) == []
    with pytest.raises(ExportError):
        export_sql(inst, pres, fold_maps=["age"])


def test_empty_instance(foaf):
    ddl, tables = export_sql(empty_instance(foaf), foaf)
    assert ddl == _golden("foaf_sql", "schema.sql")
    assert all(_rows(t) == 0 for t in tables.values())


@pytest.mark.parametrize("fold", [False, True])
def test_sql_round_trip(foaf, foaf_inst, fold):
    _, tables = export_sql(foaf_inst, foaf, fold_maps=fold)
    back = import_sql(tables, foaf)
    assert back.relations == foaf_inst.relations
    assert {t: set(c) for t, c in back.carriers.items()} == \
        {t: set(c) for t, c in foaf_inst.carriers.items()}


@given(st.integers(0, 100_000))
def test_random_sql_round_trip(seed):
    rng = random.Random(seed)
    pres = random_presentation(rng, distributive=rng.random() < 0.5)
    inst = random_instance(pres, rng, max_carrier=3)
    _, tables = export_sql(inst, pres)
    back = import_sql(tables, pres)
    assert back.relations == inst.relations


# -- graphs ----------------------------------------------------------------

def test_person_graph_golden(foaf, foaf_inst):
    g = category_of_elements(foaf_inst, foaf, types=["Person"], relations=["knows", "friend of"])
    assert len(g.vertices) == 4
    labels = sorted(label for _, label, _ in g.edges)
    assert labels == ["friend of"] * 2 + ["knows"] * 4
    assert export_dot(g) == _golden("foaf_elements.dot")


def test_graph_with_organizations(foaf, foaf_inst):
    g = category_of_elements(foaf_inst, foaf, types=["Person", "Organization"],
                             relations=["knows", "friend of"])
    assert (len(g.vertices), len(g.edges)) == (6, 6)
    g = category_of_elements(foaf_inst, foaf, types=["Person", "Organization"],
                             relations=["knows", "friend of", "works at"])
    assert len(g.edges) == 8


def test_edge_count_is_total_relation_size(foaf, foaf_inst):
    g = category_of_elements(foaf_inst, foaf)
    basic = [n for n, (d, c) in foaf.relation_generators.items()
             if isinstance(d, Ob) and isinstance(c, Ob)]
    assert len(g.edges) == sum(len(foaf_inst.relations[n].pairs) for n in basic)


def test_product_vertices_carry_salary(foaf, foaf_inst):
    g = category_of_elements(foaf_inst, foaf, relations=["salary"], product_vertices=True)
    labels = sorted(label for _, label, _ in g.edges)
    assert labels == ["pi1", "pi1", "pi2", "pi2", "salary", "salary"]


def test_undirected_symmetric(foaf, foaf_inst):
    g = category_of_elements(foaf_inst, foaf, types=["Person"], relations=["knows"],
                             undirected_symmetric=True)
    assert len(g.edges) == 2
    assert "dir=none" in export_dot(g)


def test_small_graphs(foaf):
    assert not category_of_elements(empty_instance(foaf), foaf).vertices
    pres = parse_olog("type A\nrel R : A -> A\n")
    inst = parse_instance("type A = {a}\nrel R = {(a,a)}\n", pres)
    g = category_of_elements(inst, pres)
    assert g.vertices == [("A", "a")] and g.edges == [(("A", "a"), "R", ("A", "a"))]


# -- diagrams --------------------------------------------------------------

def test_composite_diagram(foaf):
    ir = diagram(Compose((Gen("friend of"), Gen("knows"))), foaf)
    boxes = [b for layer in ir.layers for b in layer]
    assert [b.label for b in boxes] == ["friend of", "knows"]
    inner = [w for w in ir.wires if w[0][0] not in ("in", "out") and w[1][0] not in ("in", "out")]
    assert len(inner) == 1 and inner[0][2] == "Person"


def test_meet_diagram(foaf):
    ir = diagram(Meet(Gen("knows"), Gen("friend of")), foaf)
    kinds = [[b.kind for b in layer] for layer in ir.layers]
    assert kinds[0] == ["copy"] and kinds[-1] == ["merge"]
    assert sorted(b.label for b in ir.layers[1]) == ["friend of", "knows"]


def test_unknown_format(foaf):
    with pytest.raises(UnsupportedFormat):
        render_diagram(Gen("knows"), foaf, "svg")


@pytest.mark.parametrize("fmt", ["dot", "tikz", "json"])
def test_render_is_stable(foaf, fmt):
    e = foaf.definitions["love triangle"]
    assert render_diagram(e, foaf, fmt) == render_diagram(e, foaf, fmt)


@given(st.integers(0, 100_000))
def test_json_ignores_bracketing(seed):
    rng = random.Random(seed)
    pres = random_presentation(rng)
    e = random_expr(pres, rng, depth=3)
    try:
        a = render_diagram(e, pres, "json")
    except UnsupportedFormat:
        return
    assert a == render_diagram(normalize_strict(e), pres, "json")
    json.loads(a)
