import dataclasses
import random

import numpy as np
from hypothesis import given, strategies as st

from relolog.boolmat import (
    as_matrix, bridge, eval_matrix, identity, mat_compose, mat_dsum, mat_kron,
    mat_structural, parse_matrix, format_matrix, relation_matrix,
)
from relolog.core import Bottom, Dagger, Gen, Join, Ob
from relolog.finrel import empty_instance, eval_expr
from relolog.randgen import random_expr, random_instance, random_presentation

P = Ob("Person")
FRIEND = as_matrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
KNOWS = as_matrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def test_bridge_gives_the_foaf_matrices(foaf_inst):
    m = bridge(foaf_inst).matrices
    assert np.array_equal(m["friend of"], FRIEND)
    assert np.array_equal(m["knows"], KNOWS)


def test_bridge_of_empty_instance(foaf):
    assert set(bridge(empty_instance(foaf)).dims.values()) == {0}


def test_products():
    assert np.array_equal(mat_compose(FRIEND, KNOWS), as_matrix(np.diag([1, 1, 0, 0])))
    assert np.array_equal(mat_compose(KNOWS, KNOWS), identity(4))
    assert np.array_equal(mat_compose(KNOWS, identity(4)), KNOWS)


def test_kron_and_direct_sum():
    swap = as_matrix([[0, 1], [1, 0]])
    expect = as_matrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    assert np.array_equal(mat_kron(swap, identity(2)), expect)
    assert np.array_equal(mat_dsum(KNOWS, np.zeros((0, 0), dtype=bool)), KNOWS)
    assert np.array_equal(mat_dsum(as_matrix([[1]]), as_matrix([[1]])), identity(2))


def test_structural_shapes():
    assert np.array_equal(mat_structural("Copy", 2), as_matrix([[1, 0, 0, 0], [0, 0, 0, 1]]))
    assert np.array_equal(mat_structural("Delete", 3), np.ones((3, 1), dtype=bool))
    assert mat_structural("CoCreate", 3).shape == (0, 3)


def test_matrix_evaluation(foaf, foaf_inst):
    minst = bridge(foaf_inst)
    dist = dataclasses.replace(foaf, distributive=True)
    assert np.array_equal(eval_matrix(Join(Gen("friend of"), Gen("knows")), minst, dist), KNOWS)
    assert np.array_equal(eval_matrix(Dagger(Gen("friend of")), minst, foaf), FRIEND)
    assert not eval_matrix(Bottom(P, P), minst, dist).any()


def test_text_round_trip():
    assert np.array_equal(parse_matrix(format_matrix(KNOWS)), KNOWS)


@given(st.integers(0, 100_000))
def test_agrees_with_finrel(seed):
    rng = random.Random(seed)
    pres = random_presentation(rng, distributive=rng.random() < 0.5)
    inst = random_instance(pres, rng, max_carrier=4)
    e = random_expr(pres, rng, depth=5)
    rel = eval_expr(e, inst, pres)
    assert np.array_equal(relation_matrix(rel, inst.carriers), eval_matrix(e, bridge(inst), pres))
