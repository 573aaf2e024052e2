"""Semantic checks of sequents in finite instances, and random models of theories."""
from __future__ import annotations

import random

from ..core import OlogPresentation, otensor
from ..finrel import FinRelation, Instance, carrier, eval_expr, join_tensor, split_tensor
from .semantics import SignatureMap, interpret, type_to_obj
from .syntax import (
    And, Context, Eq, Exists, Falsity, Or, Rel, Sequent, Theory, Truth, Var,
)


class _Semantics:
    """Satisfying assignments of formulas in one presentation, cached per formula."""

    def __init__(self, thy: Theory, pres: OlogPresentation, smap: SignatureMap | None = None):
        self.thy = thy
        self.pres = pres
        self.smap = smap or SignatureMap()
        self._morphisms = {}

    def morphism(self, ctx: Context, phi):
        key = (ctx.entries, phi)
        m = self._morphisms.get(key)
        if m is None:
            whole = Context(ctx.entries, len(ctx.entries))
            m = self._morphisms[key] = interpret(whole, phi, self.thy, self.pres, self.smap)
        return m

    def satisfying(self, inst: Instance, ctx: Context, phi) -> frozenset:
        """Elements of the context object at which ``phi`` holds."""
        rel = eval_expr(self.morphism(ctx, phi), inst, self.pres)
        return frozenset(x for x, _ in rel.pairs)

    def holds(self, inst: Instance, seq: Sequent) -> bool:
        ctx = seq.context.unsplit()
        return self.satisfying(inst, ctx, seq.lhs) <= self.satisfying(inst, ctx, seq.rhs)

    def obj(self, ty):
        return type_to_obj(ty, self.smap, self.pres)

    def generator_split(self, symbol):
        """Generator name and how many leading arguments form its domain."""
        g = self.smap.gen(symbol, self.pres, self.smap.relations)
        dom, cod = self.pres.relation_generators[g]
        objs = [self.obj(t) for t in self.thy.relations[symbol]]
        for k in range(len(objs) + 1):
            if otensor(*objs[:k]) == dom and otensor(*objs[k:]) == cod:
                return g, k, objs
        raise ValueError(f"cannot split the arguments of {symbol!r} as {g!r}")


def sequent_holds(seq: Sequent, thy: Theory, inst: Instance, pres: OlogPresentation,
                  smap: SignatureMap | None = None) -> bool:
    """Whether ``[[lhs]] <= [[rhs]]`` in the instance."""
    return _Semantics(thy, pres, smap).holds(inst, seq)


def is_model(thy: Theory, inst: Instance, pres: OlogPresentation,
             smap: SignatureMap | None = None) -> bool:
    sem = _Semantics(thy, pres, smap)
    return all(sem.holds(inst, ax) for ax in thy.axioms)


class _Stuck(Exception):
    pass


def _random_carriers(pres, rng, bound):
    return {t: tuple(f"{t}{i + 1}" for i in range(rng.randint(1, bound)))
            for t in pres.type_generators}


def _random_relations(pres, carriers, rng, density):
    rels = {}
    for name, (dom, cod) in pres.relation_generators.items():
        p = rng.random() * density
        pairs = {(x, y) for x in carrier(dom, carriers) for y in carrier(cod, carriers)
                 if rng.random() < p}
        rels[name] = pairs
    return rels


def random_model(thy: Theory, pres: OlogPresentation, rng: random.Random, bound: int = 3,
                 smap: SignatureMap | None = None, density: float = 0.5,
                 rounds: int = 30, tries: int = 500) -> Instance:
    """A random instance satisfying every axiom of ``thy``.

    Starts from random relations and repairs violated axioms by adding tuples
    (choosing witnesses and disjuncts at random).  Attempts that need an
    equation or falsity to be repaired are thrown away and restarted.
    """
    sem = _Semantics(thy, pres, smap)
    for _ in range(tries):
        carriers = _random_carriers(pres, rng, bound)
        rels = _random_relations(pres, carriers, rng, density)
        try:
            inst = _chase(sem, carriers, rels, rng, rounds)
        except _Stuck:
            continue
        if inst is not None:
            return inst
    raise RuntimeError(f"no model of {thy.name or 'the theory'} found in {tries} attempts")


def _freeze(pres, carriers, rels):
    return Instance(carriers, {n: FinRelation(*pres.relation_generators[n], rels[n])
                               for n in pres.relation_generators})


def _chase(sem, carriers, rels, rng, rounds):
    pres = sem.pres
    for _ in range(rounds):
        inst = _freeze(pres, carriers, rels)
        changed = False
        for ax in sem.thy.axioms:
            ctx = ax.context.unsplit()
            bad = sem.satisfying(inst, ctx, ax.lhs) - sem.satisfying(inst, ctx, ax.rhs)
            if not bad:
                continue
            objs = [sem.obj(t) for t in ctx.types]
            for elem in sorted(bad, key=repr):
                env = dict(zip(ctx.names, split_tensor(objs, elem)))
                _repair(sem, carriers, rels, rng, ax.rhs, env)
            changed = True
        if not changed:
            return inst
    return None


def _repair(sem, carriers, rels, rng, f, env):
    if isinstance(f, Truth):
        return
    if isinstance(f, Falsity):
        raise _Stuck
    if isinstance(f, Eq):
        if not (isinstance(f.left, Var) and isinstance(f.right, Var)) \
                or env[f.left.name] != env[f.right.name]:
            raise _Stuck
        return
    if isinstance(f, And):
        _repair(sem, carriers, rels, rng, f.left, env)
        _repair(sem, carriers, rels, rng, f.right, env)
        return
    if isinstance(f, Or):
        _repair(sem, carriers, rels, rng, rng.choice((f.left, f.right)), env)
        return
    if isinstance(f, Exists):
        choices = carrier(sem.obj(f.type), carriers)
        if not choices:
            raise _Stuck
        _repair(sem, carriers, rels, rng, f.body, {**env, f.var: rng.choice(choices)})
        return
    if isinstance(f, Rel):
        if not all(isinstance(a, Var) for a in f.args):
            raise _Stuck
        g, k, objs = sem.generator_split(f.symbol)
        vals = [env[a.name] for a in f.args]
        rels[g].add((join_tensor(objs[:k], vals[:k]), join_tensor(objs[k:], vals[k:])))
        return
    raise TypeError(f)


__all__ = ["sequent_holds", "is_model", "random_model"]
