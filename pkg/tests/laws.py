"""Bicategory-of-relations laws, checked the same way in every backend.

Each law takes a random case (presentation, instance, rng) and returns True
when the law holds.  The backends differ only in how an expression is
evaluated and how two results are compared.
"""
import random
from fractions import Fraction

import numpy as np

from relolog.boolmat import bridge, eval_matrix
from relolog.core import (
    Compose, Copy, Counit, Create, Dagger, Delete, Distribute, DistributeInv, Gen, Id,
    Join, Meet, Merge, Tensor, Unit, children, desugar, infer_type,
)
from relolog.finrel import FinRelation, carrier, classify_map, eval_expr
from relolog.linrel import eval_linrel, graph, is_map, lin_dim
from relolog.randgen import ExprGen, random_instance, random_linear_instance, random_presentation


class FinRelBackend:
    name = "finrel"
    linear = False

    def case(self, rng):
        pres = random_presentation(rng, distributive=rng.random() < 0.5)
        inst = random_instance(pres, rng, max_carrier=3)
        return pres, inst

    def ev(self, expr, pres, inst):
        return eval_expr(expr, inst, pres).pairs

    def eq(self, a, b):
        return a == b

    def le(self, a, b):
        return a <= b

    def transpose(self, a):
        return frozenset((y, x) for x, y in a)

    def is_function(self, expr, pres, inst):
        dom, cod = infer_type(expr, pres)
        return classify_map(FinRelation(dom, cod, self.ev(expr, pres, inst)), inst.carriers).is_function

    def with_function(self, pres, inst, name, rng):
        dom, cod = pres.relation_generators[name]
        ys = carrier(cod, inst.carriers)
        xs = carrier(dom, inst.carriers)
        if not ys and xs:
            return inst
        pairs = {(x, rng.choice(ys)) for x in xs}
        return inst.with_relation(name, FinRelation(dom, cod, pairs))


class BoolMatBackend(FinRelBackend):
    name = "boolmat"

    def ev(self, expr, pres, inst):
        return eval_matrix(expr, bridge(inst), pres)

    def eq(self, a, b):
        return a.shape == b.shape and np.array_equal(a, b)

    def le(self, a, b):
        return a.shape == b.shape and not (a & ~b).any()

    def transpose(self, a):
        return a.T

    def is_function(self, expr, pres, inst):
        m = self.ev(expr, pres, inst)
        return bool((m.sum(axis=1) == 1).all())


class LinRelBackend:
    name = "linrel"
    linear = True

    def case(self, rng):
        pres = random_presentation(rng, distributive=rng.random() < 0.5)
        return pres, random_linear_instance(pres, rng, max_dim=2)

    def ev(self, expr, pres, inst):
        return eval_linrel(expr, inst, pres)

    def eq(self, a, b):
        return a == b

    def le(self, a, b):
        return a <= b

    def transpose(self, a):
        return a.transpose()

    def is_function(self, expr, pres, inst):
        return is_map(self.ev(expr, pres, inst))

    def with_function(self, pres, inst, name, rng):
        dom, cod = pres.relation_generators[name]
        n, m = lin_dim(dom, inst.dims), lin_dim(cod, inst.dims)
        mat = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(m)]
        rels = dict(inst.relations)
        rels[name] = graph(mat, n)
        return type(inst)(inst.dims, rels)


BACKENDS = [FinRelBackend(), BoolMatBackend(), LinRelBackend()]


def _uses_distribute(e):
    if isinstance(e, (Distribute, DistributeInv)):
        return True
    return any(_uses_distribute(c) for c in children(e))


def random_morphism(backend, pres, rng, depth=2):
    """A random expression the backend can evaluate."""
    gen = ExprGen(pres, rng, max_weight=16)
    while True:
        e = gen.expr(depth)
        if not (backend.linear and _uses_distribute(e)):
            return e


def parallel_pair(backend, pres, rng, depth=2):
    gen = ExprGen(pres, rng, max_weight=16)
    left = random_morphism(backend, pres, rng, depth)
    dom, cod = infer_type(left, pres)
    for _ in range(20):
        right = gen.typed(depth, dom, cod)
        if not (backend.linear and _uses_distribute(right)):
            return left, right
    return left, left


def _obj(pres, rng):
    return ExprGen(pres, rng, max_weight=16, distributive=False).obj()


# -- the laws -----------------------------------------------------------

def frobenius(b, pres, inst, rng):
    x = _obj(pres, rng)
    left = Compose((Tensor((Copy(x), Id(x))), Tensor((Id(x), Merge(x)))))
    mid = Compose((Merge(x), Copy(x)))
    right = Compose((Tensor((Id(x), Copy(x))), Tensor((Merge(x), Id(x)))))
    a, m, c = (b.ev(e, pres, inst) for e in (left, mid, right))
    return b.eq(a, m) and b.eq(m, c)


def special(b, pres, inst, rng):
    x = _obj(pres, rng)
    return b.eq(b.ev(Compose((Copy(x), Merge(x))), pres, inst), b.ev(Id(x), pres, inst))


def zigzag(b, pres, inst, rng):
    x = _obj(pres, rng)
    one = Compose((Tensor((Id(x), Unit(x))), Tensor((Counit(x), Id(x)))))
    two = Compose((Tensor((Unit(x), Id(x))), Tensor((Id(x), Counit(x)))))
    ident = b.ev(Id(x), pres, inst)
    return b.eq(b.ev(one, pres, inst), ident) and b.eq(b.ev(two, pres, inst), ident)


def dagger_transpose(b, pres, inst, rng):
    """Dagger is the transpose, and agrees with bending both wires."""
    r = random_morphism(b, pres, rng)
    x, y = infer_type(r, pres)
    dag = b.ev(Dagger(r), pres, inst)
    bent = Compose((Tensor((Unit(x), Id(y))), Tensor((Id(x), r, Id(y))),
                    Tensor((Id(x), Counit(y)))))
    return b.eq(dag, b.transpose(b.ev(r, pres, inst))) and b.eq(dag, b.ev(bent, pres, inst))


def lax_comonoid(b, pres, inst, rng):
    r = random_morphism(b, pres, rng)
    x, y = infer_type(r, pres)
    ok = b.le(b.ev(Compose((r, Copy(y))), pres, inst),
              b.ev(Compose((Copy(x), Tensor((r, r)))), pres, inst))
    ok &= b.le(b.ev(Compose((r, Delete(y))), pres, inst), b.ev(Delete(x), pres, inst))
    return ok


def lax_monoid(b, pres, inst, rng):
    r = random_morphism(b, pres, rng)
    x, y = infer_type(r, pres)
    ok = b.le(b.ev(Compose((Merge(x), r)), pres, inst),
              b.ev(Compose((Tensor((r, r)), Merge(y))), pres, inst))
    ok &= b.le(b.ev(Compose((Create(x), r)), pres, inst), b.ev(Create(y), pres, inst))
    return ok


def map_adjunction(b, pres, inst, rng):
    """``1 <= R;R+`` and ``R+;R <= 1`` exactly when R is a total function."""
    name = rng.choice(list(pres.relation_generators))
    if rng.random() < 0.5:
        inst = b.with_function(pres, inst, name, rng)
    r = Gen(name) if rng.random() < 0.6 else random_morphism(b, pres, rng)
    x, y = infer_type(r, pres)
    adjoint = (b.le(b.ev(Id(x), pres, inst), b.ev(Compose((r, Dagger(r))), pres, inst))
               and b.le(b.ev(Compose((Dagger(r), r)), pres, inst), b.ev(Id(y), pres, inst)))
    return adjoint == b.is_function(r, pres, inst)


def meet_join_shortcut(b, pres, inst, rng):
    r, s = parallel_pair(b, pres, rng)
    ok = b.eq(b.ev(Meet(r, s), pres, inst), b.ev(desugar(Meet(r, s), pres), pres, inst))
    if pres.distributive:
        ok &= b.eq(b.ev(Join(r, s), pres, inst), b.ev(desugar(Join(r, s), pres), pres, inst))
    return ok


LAWS = {
    "frobenius": frobenius,
    "special": special,
    "zigzag": zigzag,
    "dagger": dagger_transpose,
    "lax comonoid": lax_comonoid,
    "lax monoid": lax_monoid,
    "maps": map_adjunction,
    "meet/join": meet_join_shortcut,
}


def run_law(backend, law, cases, seed):
    """Number of failing cases among ``cases`` random ones."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(cases):
        pres, inst = backend.case(rng)
        if not law(backend, pres, inst, rng):
            failures += 1
    return failures
