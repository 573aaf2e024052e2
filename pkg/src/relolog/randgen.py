"""Random presentations, instances and well-typed expressions for property tests."""
from __future__ import annotations

import random
from fractions import Fraction

from .core import (
    I, O, Ob, ObSum, ObTensor, OlogPresentation, UnitI, ZeroO, infer_type, normalize_object,
    depth as expr_depth,
    osum, otensor,
    Braid, Bottom, CoCopy, CoCreate, CoDelete, CoMerge, Compose, Copy, Counit, Create,
    Dagger, Delete, Distribute, DistributeInv, Gen, Id, Join, Meet, Merge, SumBraid,
    SumTensor, Tensor, Top, Unit,
)
from .finrel import FinRelation, Instance, carrier
from .linrel import LinRel, LinearInstance, lin_dim


def random_object(types, rng: random.Random, distributive=False, max_factors=2):
    """A small object over the given type names."""
    def ob():
        return Ob(rng.choice(types))

    if distributive:
        roll = rng.random()
        if roll < 0.1:
            return otensor(ob(), osum(ob(), ob()))
        if roll < 0.2:
            x = ob()
            return osum(otensor(x, ob()), otensor(x, ob()))
        if roll < 0.25:
            return O
        if roll < 0.5:
            return osum(otensor(*(ob() for _ in range(rng.randint(0, 1)))), ob())
    k = rng.randint(0, max_factors) if rng.random() < 0.4 else 1
    return otensor(*(ob() for _ in range(k)))


def random_presentation(rng: random.Random, distributive=False, n_types=None, n_rels=None,
                        name="random") -> OlogPresentation:
    """Presentation with a few types and relation generators and no axioms."""
    n_types = n_types or rng.randint(1, 3)
    n_rels = n_rels or rng.randint(1, 4)
    types = tuple(f"T{i}" for i in range(n_types))
    rels = {}
    for j in range(n_rels):
        dom = random_object(types, rng, distributive, max_factors=1)
        cod = random_object(types, rng, distributive, max_factors=1)
        rels[f"r{j}"] = (dom, cod)
    return OlogPresentation.build(types, rels, (), distributive=distributive, name=name)


def random_carriers(pres: OlogPresentation, rng: random.Random, max_carrier=4, min_carrier=0):
    return {t: tuple(f"{t.lower()}{i}" for i in range(rng.randint(min_carrier, max_carrier)))
            for t in pres.type_generators}


def random_instance(pres: OlogPresentation, rng: random.Random, max_carrier=4,
                    min_carrier=0, density=None) -> Instance:
    carriers = random_carriers(pres, rng, max_carrier, min_carrier)
    rels = {}
    for name, (dom, cod) in pres.relation_generators.items():
        p = rng.random() if density is None else density
        pairs = {(x, y) for x in carrier(dom, carriers) for y in carrier(cod, carriers)
                 if rng.random() < p}
        rels[name] = FinRelation(dom, cod, pairs)
    return Instance(carriers, rels)


def random_linear_instance(pres: OlogPresentation, rng: random.Random, max_dim=3) -> LinearInstance:
    dims = {t: rng.randint(0, max_dim) for t in pres.type_generators}
    rels = {}
    for name, (dom, cod) in pres.relation_generators.items():
        n, m = lin_dim(dom, dims), lin_dim(cod, dims)
        rows = [[Fraction(rng.randint(-2, 2)) for _ in range(n + m)]
                for _ in range(rng.randint(0, n + m))]
        rels[name] = LinRel.span(n, m, rows)
    return LinearInstance(dims, rels)


# ---------------------------------------------------------------------------
# expressions

def _weight(obj, base=4):
    """Carrier size of ``obj`` when every type has ``base`` elements."""
    if isinstance(obj, ObTensor):
        out = 1
        for f in obj.factors:
            out *= _weight(f, base)
        return out
    if isinstance(obj, ObSum):
        return sum(_weight(s, base) for s in obj.summands)
    if isinstance(obj, UnitI):
        return 1
    return 0 if isinstance(obj, ZeroO) else base


class ExprGen:
    """Random well-typed morphism expressions with a fixed domain.

    ``max_weight`` bounds the carrier size (at four elements per type) of every
    intermediate object so that finite evaluation stays small.
    """

    def __init__(self, pres: OlogPresentation, rng: random.Random, max_weight=64,
                 distributive=None):
        self.pres = pres
        self.rng = rng
        self.max_weight = max_weight
        self.dist = pres.distributive if distributive is None else distributive
        self.types = pres.type_generators

    def obj(self):
        while True:
            o = random_object(self.types, self.rng, self.dist)
            if _weight(o) <= self.max_weight:
                return o

    def expr(self, depth, dom=None):
        """An expression out of ``dom`` whose tree depth is at most ``depth``."""
        dom = self.obj() if dom is None else normalize_object(dom)
        for _ in range(50):
            e = self._expr(depth, dom)
            if e is not None and expr_depth(e) <= max(depth, 1) \
                    and _weight(infer_type(e, self.pres)[1]) <= self.max_weight:
                return e
        return Id(dom)

    def typed(self, depth, dom, cod, attempts=12):
        """An expression ``dom -> cod``; falls back to simple ones."""
        for _ in range(attempts):
            e = self.expr(depth, dom)
            if infer_type(e, self.pres)[1] == cod:
                return e
        gens = [Gen(g) for g, (d, c) in self.pres.relation_generators.items()
                if d == dom and c == cod]
        options = gens + [Top(dom, cod)]
        if self.dist:
            options.append(Bottom(dom, cod))
        if dom == cod:
            options.append(Id(dom))
        return self.rng.choice(options)

    def _leaf(self, dom):
        rng = self.rng
        options = [lambda: Id(dom), lambda: Copy(dom), lambda: Delete(dom),
                   lambda: Top(dom, self.obj())]
        for g, (d, c) in self.pres.relation_generators.items():
            if d == dom:
                options.append(lambda g=g: Gen(g))
            if c == dom:
                options.append(lambda g=g: Dagger(Gen(g)))
        if dom == I:
            options += [lambda: Create(self.obj()), lambda: Unit(self.obj())]
        fs = dom.factors if isinstance(dom, ObTensor) else None
        if fs:
            half = len(fs) // 2
            if len(fs) % 2 == 0 and fs[:half] == fs[half:]:
                x = otensor(*fs[:half])
                options += [lambda: Merge(x), lambda: Counit(x)]
            k = rng.randint(1, len(fs) - 1)
            options.append(lambda: Braid(otensor(*fs[:k]), otensor(*fs[k:])))
        if self.dist:
            options += [lambda: CoCopy(dom), lambda: CoDelete(dom),
                        lambda: Bottom(dom, self.obj())]
            if dom == O:
                options.append(lambda: CoCreate(self.obj()))
            if isinstance(dom, ObSum):
                ss = dom.summands
                half = len(ss) // 2
                if len(ss) % 2 == 0 and ss[:half] == ss[half:]:
                    options.append(lambda: CoMerge(osum(*ss[:half])))
                k = rng.randint(1, len(ss) - 1)
                options.append(lambda: SumBraid(osum(*ss[:k]), osum(*ss[k:])))
                # distribute_inv from (X*Y) + (X*Z)
                if len(ss) == 2:
                    a, b = ss
                    af = a.factors if isinstance(a, ObTensor) else (a,)
                    bf = b.factors if isinstance(b, ObTensor) else (b,)
                    if len(af) >= 2 and len(bf) >= 2 and af[0] == bf[0]:
                        options.append(lambda: DistributeInv(af[0], otensor(*af[1:]),
                                                             otensor(*bf[1:])))
            if fs and len(fs) == 2 and isinstance(fs[1], ObSum) and len(fs[1].summands) == 2:
                y, z = fs[1].summands
                options.append(lambda: Distribute(fs[0], y, z))
        return rng.choice(options)()

    def _expr(self, depth, dom):
        rng = self.rng
        if depth <= 1 or rng.random() < 0.2:
            return self._leaf(dom)
        kinds = ["compose", "compose", "tensor", "meet", "dagger"]
        if self.dist:
            kinds += ["join", "sum"]
        kind = rng.choice(kinds)
        if kind == "compose":
            first = self.expr(depth - 1, dom)
            mid = infer_type(first, self.pres)[1]
            return Compose((first, self.expr(depth - 1, mid)))
        if kind == "tensor":
            fs = dom.factors if isinstance(dom, ObTensor) else ((dom,) if dom != I else ())
            k = rng.randint(0, len(fs))
            return Tensor((self.expr(depth - 1, otensor(*fs[:k])),
                           self.expr(depth - 1, otensor(*fs[k:]))))
        if kind in ("meet", "join"):
            left = self.expr(depth - 1, dom)
            cod = infer_type(left, self.pres)[1]
            right = self.typed(depth - 1, dom, cod)
            return Meet(left, right) if kind == "meet" else Join(left, right)
        if kind == "dagger":
            cod = self.obj()
            inner = self.typed(depth - 1, cod, dom)
            return Dagger(inner)
        if kind == "sum":
            if not isinstance(dom, ObSum):
                return None
            ss = dom.summands
            k = rng.randint(1, len(ss) - 1)
            return SumTensor((self.expr(depth - 1, osum(*ss[:k])),
                              self.expr(depth - 1, osum(*ss[k:]))))
        raise AssertionError(kind)


def random_expr(pres: OlogPresentation, rng: random.Random, depth=3, dom=None, max_weight=64):
    return ExprGen(pres, rng, max_weight).expr(depth, dom)


def random_typed_expr(pres: OlogPresentation, rng: random.Random, dom, cod, depth=3,
                      max_weight=64):
    return ExprGen(pres, rng, max_weight).typed(depth, normalize_object(dom), normalize_object(cod))


__all__ = [
    "random_object", "random_presentation", "random_carriers", "random_instance",
    "random_linear_instance", "ExprGen", "random_expr", "random_typed_expr",
]
