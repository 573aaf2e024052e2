"""Formulas as morphisms and morphisms as formulas.

``interpret`` sends a formula in a split context ``[x:A ; y:B]`` to a morphism
expression from the domain-side types to the codomain-side types.
``translate_to_logic`` goes the other way, mirroring the construction of the
classifying category one clause at a time.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core import (
    I, O, Ob, ObSum, ObTensor, OlogError, OlogPresentation, UnitI, ZeroO, factors,
    infer_type, normalize_object, normalize_strict, osum, otensor, summands,
    Braid, Bottom, CoCopy, CoCreate, CoDelete, CoMerge, Compose, Copy, Counit,
    Create, Dagger, Delete, Distribute, DistributeInv, Gen, Id, Join, Meet, Merge,
    SumBraid, SumTensor, Tensor, Top, Unit,
)
from .formation import check_formula, type_of
from .syntax import (
    And, App, Basic, Case, Context, Eq, Exists, Falsity, Inj1, Inj2, One,
    Or, PairT, Prod, Proj1, Proj2, Rel, StarT, SumT, Theory, Truth, Var, Zero, conj,
    disj, free_vars, fresh_name, subst_formula,
)


class UnmappedSymbol(OlogError):
    pass


@dataclass(frozen=True)
class SignatureMap:
    """Interpretation of a theory's signature in a presentation.

    Basic types go to objects and relation/function symbols to generator
    names.  Symbols missing from the maps are looked up under their own name.
    """
    types: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)

    def obj(self, name, pres):
        if name in self.types:
            return normalize_object(self.types[name])
        if name in pres.type_generators:
            return Ob(name)
        raise UnmappedSymbol(f"basic type {name!r} has no interpretation")

    def gen(self, symbol, pres, table):
        name = table.get(symbol, symbol)
        if name not in pres.relation_generators:
            raise UnmappedSymbol(f"symbol {symbol!r} has no interpretation")
        return name


def type_to_obj(ty, smap: SignatureMap, pres) -> object:
    if isinstance(ty, Basic):
        return smap.obj(ty.name, pres)
    if isinstance(ty, Prod):
        return otensor(type_to_obj(ty.left, smap, pres), type_to_obj(ty.right, smap, pres))
    if isinstance(ty, One):
        return I
    if isinstance(ty, SumT):
        return osum(type_to_obj(ty.left, smap, pres), type_to_obj(ty.right, smap, pres))
    if isinstance(ty, Zero):
        return O
    raise TypeError(ty)


def obj_to_type(obj):
    """Logic type of a normalized object; products and sums nest to the right."""
    if isinstance(obj, Ob):
        return Basic(obj.name)
    if isinstance(obj, UnitI):
        return One()
    if isinstance(obj, ZeroO):
        return Zero()
    parts = obj.factors if isinstance(obj, ObTensor) else obj.summands
    node = Prod if isinstance(obj, ObTensor) else SumT
    out = obj_to_type(parts[-1])
    for p in reversed(parts[:-1]):
        out = node(obj_to_type(p), out)
    return out


# ---------------------------------------------------------------------------
# formulas to morphisms

def permutation(objs, order):
    """Braids taking ``objs`` to ``[objs[i] for i in order]``, by adjacent swaps."""
    current = list(range(len(objs)))
    steps = []
    target = list(order)
    for pos in range(len(target)):
        j = current.index(target[pos])
        while j > pos:
            left = [objs[k] for k in current[:j - 1]]
            right = [objs[k] for k in current[j + 1:]]
            a, b = objs[current[j - 1]], objs[current[j]]
            steps.append(Tensor((Id(otensor(*left)), Braid(a, b), Id(otensor(*right)))))
            current[j - 1], current[j] = current[j], current[j - 1]
            j -= 1
    if not steps:
        return Id(otensor(*objs))
    return Compose(tuple(steps))


def copies(obj, n):
    """The n-fold diagonal ``obj -> obj^n``."""
    if n == 0:
        return Delete(obj)
    if n == 1:
        return Id(obj)
    out = Copy(obj)
    for k in range(2, n):
        out = Compose((out, Tensor((Id(otensor(*[obj] * (k - 1))), Copy(obj)))))
    return out


class _Interp:
    def __init__(self, thy: Theory, pres: OlogPresentation, smap: SignatureMap):
        self.thy = thy
        self.pres = pres
        self.smap = smap or SignatureMap()

    def obj(self, ty):
        return type_to_obj(ty, self.smap, self.pres)

    def ctx_obj(self, entries):
        return otensor(*(self.obj(t) for _, t in entries))

    # terms ---------------------------------------------------------------

    def term(self, entries, t):
        objs = [self.obj(ty) for _, ty in entries]
        gamma = otensor(*objs)
        if isinstance(t, Var):
            idx = max(i for i, (n, _) in enumerate(entries) if n == t.name)
            parts = [Id(o) if i == idx else Delete(o) for i, o in enumerate(objs)]
            return normalize_strict(Tensor(tuple(parts))) if len(parts) > 1 else Id(objs[0])
        if isinstance(t, App):
            g = self.smap.gen(t.fn, self.pres, self.smap.functions)
            return Compose((self.term(entries, t.arg), Gen(g)))
        if isinstance(t, PairT):
            return Compose((Copy(gamma), Tensor((self.term(entries, t.left),
                                                 self.term(entries, t.right)))))
        if isinstance(t, (Proj1, Proj2)):
            ty = self._type(entries, t.term)
            a, b = self.obj(ty.left), self.obj(ty.right)
            keep = Tensor((Id(a), Delete(b))) if isinstance(t, Proj1) else Tensor((Delete(a), Id(b)))
            return Compose((self.term(entries, t.term), keep))
        if isinstance(t, StarT):
            return Delete(gamma)
        if isinstance(t, (Inj1, Inj2)):
            a, b = self.obj(t.into.left), self.obj(t.into.right)
            inc = SumTensor((Id(a), CoCreate(b))) if isinstance(t, Inj1) \
                else SumTensor((CoCreate(a), Id(b)))
            return Compose((self.term(entries, t.term), inc))
        if isinstance(t, Case):
            a, b = self.obj(t.type1), self.obj(t.type2)
            e1, r = self._bind(entries, t.var1, t.type1, t.branch1)
            e2, s = self._bind(entries, t.var2, t.type2, t.branch2)
            c = self.obj(self._type(e1, r))
            return Compose((
                Copy(gamma),
                Tensor((Id(gamma), self.term(entries, t.scrutinee))),
                Distribute(gamma, a, b),
                SumTensor((self.term(e1, r), self.term(e2, s))),
                CoMerge(c),
            ))
        raise TypeError(t)

    def _type(self, entries, t):
        return type_of(Context(tuple(entries)), t, self.thy)

    def _bind(self, entries, var, ty, body, is_formula=False):
        """Extend the context by ``var``, renaming it if already present."""
        names = {n for n, _ in entries}
        if var in names:
            from .syntax import subst_term
            new = fresh_name(var, names | (free_vars(body) if is_formula else set()))
            body = subst_formula(body, {var: Var(new)}) if is_formula \
                else subst_term(body, {var: Var(new)})
            var = new
        return list(entries) + [(var, ty)], body

    # formulas ------------------------------------------------------------

    def predicate(self, entries, f):
        """An atomic formula as a morphism from the whole context to ``I``."""
        gamma = self.ctx_obj(entries)
        if isinstance(f, Rel):
            g = self.smap.gen(f.symbol, self.pres, self.smap.relations)
            dom, cod = self.pres.relation_generators[g]
            if cod == I:
                close = Gen(g)
            else:
                close = Compose((Tensor((Gen(g), Id(cod))), Counit(cod)))
            args = [self.term(entries, a) for a in f.args]
            if not args:
                return Compose((Delete(gamma), close))
            return Compose((copies(gamma, len(args)), Tensor(tuple(args)), close))
        if isinstance(f, Eq):
            a = self.obj(self._type(entries, f.left))
            return Compose((Copy(gamma), Tensor((self.term(entries, f.left),
                                                 self.term(entries, f.right))), Counit(a)))
        raise TypeError(f)

    def _shortcut(self, dom_e, cod_e, f):
        """Direct morphisms for atoms whose variables line up with the split."""
        if isinstance(f, Rel) and all(isinstance(a, Var) for a in f.args):
            names = [a.name for a in f.args]
            g = self.smap.gen(f.symbol, self.pres, self.smap.relations)
            dom, cod = self.pres.relation_generators[g]
            din = [n for n, _ in dom_e]
            dout = [n for n, _ in cod_e]
            for k in range(len(names) + 1):
                if otensor(*(self.obj(t) for t in self.thy.relations[f.symbol][:k])) == dom \
                        and otensor(*(self.obj(t) for t in self.thy.relations[f.symbol][k:])) == cod:
                    if names[:k] == din and names[k:] == dout:
                        return Gen(g)
                    if names[:k] == dout and names[k:] == din:
                        return Dagger(Gen(g))
        if isinstance(f, Eq) and isinstance(f.left, Var) and isinstance(f.right, Var) \
                and len(dom_e) == 1 and len(cod_e) == 1:
            pair = {f.left.name, f.right.name}
            if pair == {dom_e[0][0], cod_e[0][0]} and dom_e[0][1] == cod_e[0][1]:
                return Id(self.obj(dom_e[0][1]))
        return None

    def formula(self, dom_e, cod_e, f):
        din, dout = self.ctx_obj(dom_e), self.ctx_obj(cod_e)
        if isinstance(f, Truth):
            if dout == I:
                return Delete(din) if din != I else Id(I)
            if din == I:
                return Create(dout)
            return Top(din, dout)
        if isinstance(f, Falsity):
            return Bottom(din, dout)
        used = free_vars(f)
        dom_v = [(n, t) for n, t in dom_e if n in used]
        cod_v = [(n, t) for n, t in cod_e if n in used]
        if len(dom_v) < len(dom_e) or len(cod_v) < len(cod_e):
            # work over the variables that occur, then weaken
            return self.weaken(dom_e, cod_e, dom_v, cod_v, self.formula(dom_v, cod_v, f))
        if isinstance(f, And):
            return Meet(self.formula(dom_e, cod_e, f.left), self.formula(dom_e, cod_e, f.right))
        if isinstance(f, Or):
            return Join(self.formula(dom_e, cod_e, f.left), self.formula(dom_e, cod_e, f.right))
        if isinstance(f, Exists):
            names = {n for n, _ in dom_e} | {n for n, _ in cod_e}
            var, body = f.var, f.body
            if var in names:
                new = fresh_name(var, names | free_vars(body))
                body = subst_formula(body, {var: Var(new)})
                var = new
            inner = self.formula(dom_e, list(cod_e) + [(var, f.type)], body)
            return Compose((inner, Tensor((Id(dout), Delete(self.obj(f.type))))))
        core = self._shortcut(dom_e, cod_e, f)
        if core is not None:
            return core
        p = self.predicate(list(dom_e) + list(cod_e), f)
        # bend the codomain-side wires of the predicate back to the right
        return Compose((Tensor((Id(din), Unit(dout))), Tensor((p, Id(dout)))))

    def weaken(self, dom_e, cod_e, dom_v, cod_v, core):
        """Extend ``core: [[dom_v]] -> [[cod_v]]`` to the full context.

        Unused domain wires are deleted; unused codomain wires are created
        freely and braided back into context order.
        """
        keep = {n for n, _ in dom_v}
        proj = Tensor(tuple(Id(self.obj(t)) if n in keep else Delete(self.obj(t))
                            for n, t in dom_e))
        keep = {n for n, _ in cod_v}
        rest = [(n, t) for n, t in cod_e if n not in keep]
        pad = Tensor((Id(self.ctx_obj(cod_v)), Create(self.ctx_obj(rest))))
        names = [n for n, _ in cod_v + rest]
        order = [names.index(n) for n, _ in cod_e]
        perm = permutation([self.obj(t) for _, t in cod_v + rest], order)
        return Compose((proj, core, pad, perm))


def interpret(ctx: Context, phi, thy: Theory, pres: OlogPresentation,
              smap: SignatureMap | None = None):
    """Morphism ``[[dom-side types]] -> [[cod-side types]]`` for a formula."""
    check_formula(ctx.unsplit(), phi, thy)
    it = _Interp(thy, pres, smap)
    return normalize_strict(it.formula(list(ctx.dom_part), list(ctx.cod_part), phi))


def interpret_term(ctx: Context, t, thy: Theory, pres: OlogPresentation,
                   smap: SignatureMap | None = None):
    """Map ``[[ctx]] -> [[type of t]]`` for a well-typed term."""
    type_of(ctx.unsplit(), t, thy)
    return normalize_strict(_Interp(thy, pres, smap).term(list(ctx.entries), t))


# ---------------------------------------------------------------------------
# morphisms to formulas

def theory_of_presentation(pres: OlogPresentation) -> Theory:
    """Signature whose relation symbols are the generators.

    A generator ``R : X -> Y`` becomes a relation symbol whose argument types
    are the factors of ``X`` followed by the factors of ``Y``.
    """
    rels = {name: tuple(obj_to_type(f) for f in factors(d) + factors(c))
            for name, (d, c) in pres.relation_generators.items()}
    return Theory(tuple(pres.type_generators), rels, {}, (),
                  "coherent" if pres.distributive else "regular", pres.name)


class _Translator:
    def __init__(self, pres):
        self.pres = pres
        self.n = 0

    def fresh(self, objs):
        out = []
        for o in objs:
            out.append((f"x{self.n}", obj_to_type(o)))
            self.n += 1
        return out

    @staticmethod
    def eqs(xs, ys):
        return conj(Eq(x, y) for x, y in zip(xs, ys))

    def tup(self, terms, obj):
        """A single term of the object's logic type from its factor terms."""
        if isinstance(obj, UnitI):
            return StarT()
        if not isinstance(obj, ObTensor):
            return terms[0]
        out = terms[-1]
        for t in reversed(terms[:-1]):
            out = PairT(t, out)
        return out

    def inject_at(self, k, term, total):
        """Include a term of summand ``k`` into the right-nested sum type."""
        ss = summands(total)
        types = [obj_to_type(s) for s in ss]

        def nest(i):
            if i == len(ss) - 1:
                return types[i]
            return SumT(types[i], nest(i + 1))

        if k == len(ss) - 1:
            out = term
        else:
            out = Inj1(term, nest(k))
        for i in reversed(range(k)):
            out = Inj2(out, nest(i))
        return out

    def embed(self, term, objs, j):
        """Term of ``osum(*objs)`` from a term of ``objs[j]``."""
        total = osum(*objs)
        obj = objs[j]
        offset = sum(len(summands(o)) for o in objs[:j])
        if not isinstance(obj, ObSum):
            return self.inject_at(offset, term, total)
        return self._reinject(term, list(obj.summands), offset, total)

    def _reinject(self, term, inner, offset, total):
        if len(inner) == 1:
            return self.inject_at(offset, term, total)
        head = obj_to_type(inner[0])
        rest = osum(*inner[1:])
        a, b = f"x{self.n}", f"x{self.n + 1}"
        self.n += 2
        return Case(term, a, head, self.inject_at(offset, Var(a), total),
                    b, obj_to_type(rest), self._reinject(Var(b), inner[1:], offset + 1, total))

    def match(self, terms, objs, j, body):
        """``terms`` (factors of ``osum(*objs)``) came from operand ``j``."""
        total = osum(*objs)
        obj = objs[j]
        if isinstance(obj, ZeroO):
            return Falsity()
        if not isinstance(total, ObSum):
            return body(list(terms))
        binders = self.fresh(factors(obj))
        us = [Var(n) for n, _ in binders]
        f = And(Eq(self.embed(self.tup(us, obj), objs, j), terms[0]), body(us))
        for n, ty in reversed(binders):
            f = Exists(n, ty, f)
        return f

    def split(self, terms, objs):
        out, pos = [], 0
        for o in objs:
            k = len(factors(o))
            out.append(terms[pos:pos + k])
            pos += k
        return out

    def go(self, e, xs, ys):
        pres = self.pres
        if isinstance(e, Gen):
            return Rel(e.name, tuple(xs) + tuple(ys))
        if isinstance(e, Id):
            return self.eqs(xs, ys)
        if isinstance(e, Compose):
            f = None
            cur = xs
            binders_all = []
            parts = []
            for i, p in enumerate(e.parts):
                if i == len(e.parts) - 1:
                    nxt = ys
                else:
                    _, mid = infer_type(p, pres)
                    binders = self.fresh(factors(mid))
                    binders_all.append(binders)
                    nxt = [Var(n) for n, _ in binders]
                parts.append(self.go(p, cur, nxt))
                cur = nxt
            # exists z1. (phi1 & exists z2. (phi2 & ... ))
            f = parts[-1]
            for binders, phi in zip(reversed(binders_all), reversed(parts[:-1])):
                f = And(phi, f)
                for n, ty in reversed(binders):
                    f = Exists(n, ty, f)
            return f
        if isinstance(e, Tensor):
            types = [infer_type(p, pres) for p in e.parts]
            xss = self.split(xs, [d for d, _ in types])
            yss = self.split(ys, [c for _, c in types])
            return conj(self.go(p, a, b) for p, a, b in zip(e.parts, xss, yss))
        if isinstance(e, Braid):
            x, y = normalize_object(e.x), normalize_object(e.y)
            xa, xb = self.split(xs, [x, y])
            yb, ya = self.split(ys, [y, x])
            return conj([self.eqs(xa, ya), self.eqs(xb, yb)])
        if isinstance(e, Copy):
            x = normalize_object(e.x)
            y1, y2 = self.split(ys, [x, x])
            return conj([self.eqs(xs, y1), self.eqs(xs, y2)])
        if isinstance(e, Merge):
            x = normalize_object(e.x)
            x1, x2 = self.split(xs, [x, x])
            return conj([self.eqs(x1, ys), self.eqs(x2, ys)])
        if isinstance(e, (Delete, Create, Top)):
            return Truth()
        if isinstance(e, Unit):
            x = normalize_object(e.x)
            y1, y2 = self.split(ys, [x, x])
            return self.eqs(y1, y2)
        if isinstance(e, Counit):
            x = normalize_object(e.x)
            x1, x2 = self.split(xs, [x, x])
            return self.eqs(x1, x2)
        if isinstance(e, Dagger):
            return self.go(e.inner, ys, xs)
        if isinstance(e, Meet):
            return And(self.go(e.left, xs, ys), self.go(e.right, xs, ys))
        if isinstance(e, Join):
            return Or(self.go(e.left, xs, ys), self.go(e.right, xs, ys))
        if isinstance(e, (Bottom, CoCreate, CoDelete)):
            return Falsity()
        if isinstance(e, SumTensor):
            types = [infer_type(p, pres) for p in e.parts]
            doms = [d for d, _ in types]
            cods = [c for _, c in types]
            return disj(
                self.match(xs, doms, j, lambda us, j=j, p=p:
                           self.match(ys, cods, j, lambda vs: self.go(p, us, vs)))
                for j, p in enumerate(e.parts))
        if isinstance(e, SumBraid):
            x, y = normalize_object(e.x), normalize_object(e.y)
            return disj(
                self.match(xs, [x, y], j, lambda us, j=j:
                           self.match(ys, [y, x], 1 - j, lambda vs: self.eqs(us, vs)))
                for j in (0, 1))
        if isinstance(e, CoMerge):
            x = normalize_object(e.x)
            return disj(self.match(xs, [x, x], j, lambda us: self.eqs(us, ys)) for j in (0, 1))
        if isinstance(e, CoCopy):
            x = normalize_object(e.x)
            return disj(self.match(ys, [x, x], j, lambda vs: self.eqs(xs, vs)) for j in (0, 1))
        if isinstance(e, (Distribute, DistributeInv)):
            x, y, z = (normalize_object(o) for o in (e.x, e.y, e.z))
            src, dst = (xs, ys) if isinstance(e, Distribute) else (ys, xs)
            sx, ss = self.split(src, [x, osum(y, z)])
            outs = [otensor(x, y), otensor(x, z)]
            return disj(
                self.match(ss, [y, z], j, lambda vs, j=j:
                           self.match(dst, outs, j, lambda ws: self.eqs(ws, list(sx) + list(vs))))
                for j in (0, 1))
        raise OlogError(f"cannot translate {e!r}")


def translate_to_logic(expr, pres: OlogPresentation):
    """Formula in a split context equivalent to a morphism expression.

    Each factor of the domain and codomain gets its own variable; fresh
    variables come from one counter, so the output is deterministic.
    """
    dom, cod = infer_type(expr, pres)
    tr = _Translator(pres)
    xb = tr.fresh(factors(dom))
    yb = tr.fresh(factors(cod))
    f = tr.go(expr, [Var(n) for n, _ in xb], [Var(n) for n, _ in yb])
    return Context(tuple(xb + yb), len(xb)), f


def round_trip(expr, pres: OlogPresentation):
    """``interpret(translate_to_logic(expr))`` against the presentation itself."""
    ctx, f = translate_to_logic(expr, pres)
    return interpret(ctx, f, theory_of_presentation(pres), pres)
