"""Evaluation in finite sets and relations.

Elements of compound objects mirror the flattened object structure: an element
of ``X1 * ... * Xn`` is an n-tuple, the unit ``I`` has the single element
``()``, and an element of ``X1 + ... + Xn`` is a ``Tag(i, value)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import (
    Ob, ObSum, ObTensor, OlogError, OlogPresentation, SignatureMismatch,
    UnitI, ZeroO, factors, format_object, infer_type, normalize_object, osum,
    otensor, summands,
    Braid, Bottom, CoCopy, CoCreate, CoDelete, CoMerge, Compose, Copy, Counit,
    Create, Dagger, Delete, Distribute, DistributeInv, Gen, Id, Join, Meet, Merge,
    SumBraid, SumTensor, Tensor, Top, Unit,
)

STAR = ()


class UnboundGenerator(OlogError):
    def __init__(self, name):
        super().__init__(f"instance has no data for generator {name!r}")
        self.name = name


@dataclass(frozen=True, order=True)
class Tag:
    """Element of a sum object: ``value`` sits in summand ``index``."""
    index: int
    value: object

    def __repr__(self):
        return f"in{self.index + 1}({self.value!r})"


def inl(x):
    return Tag(0, x)


def inr(x):
    return Tag(1, x)


# ---------------------------------------------------------------------------
# element plumbing

def _flat(elem, obj):
    if isinstance(obj, UnitI):
        return ()
    if isinstance(obj, ObTensor):
        return tuple(elem)
    return (elem,)


def _build(obj, chunk):
    if isinstance(obj, UnitI):
        return STAR
    if isinstance(obj, ObTensor):
        return tuple(chunk)
    return chunk[0]


def _flattener(obj):
    if isinstance(obj, UnitI):
        return lambda e: ()
    if isinstance(obj, ObTensor):
        return tuple
    return lambda e: (e,)


def _builder(obj):
    if isinstance(obj, UnitI):
        return lambda flat: STAR
    if isinstance(obj, ObTensor):
        return tuple
    return lambda flat: flat[0]


def join_tensor(objs, elems):
    """Element of ``otensor(*objs)`` from elements of each operand."""
    flat = []
    for obj, e in zip(objs, elems):
        flat.extend(_flat(e, obj))
    return _build(otensor(*objs), flat)


def split_tensor(objs, elem):
    """Inverse of :func:`join_tensor`."""
    flat = _flat(elem, otensor(*objs))
    out, pos = [], 0
    for obj in objs:
        k = len(factors(obj))
        out.append(_build(obj, flat[pos:pos + k]))
        pos += k
    return out


def inject(objs, j, elem):
    """Element of ``osum(*objs)`` coming from operand ``j``."""
    obj = objs[j]
    if isinstance(obj, ZeroO):
        raise ValueError("the zero object has no elements")
    offset = sum(len(summands(o)) for o in objs[:j])
    if isinstance(osum(*objs), ObSum):
        if isinstance(obj, ObSum):
            return Tag(offset + elem.index, elem.value)
        return Tag(offset, elem)
    return elem


def split_sum(objs, elem):
    """Return ``(j, element of objs[j])`` for an element of ``osum(*objs)``."""
    total = osum(*objs)
    if not isinstance(total, ObSum):
        for j, obj in enumerate(objs):
            if not isinstance(obj, ZeroO):
                return j, elem
        raise ValueError("the zero object has no elements")
    k = elem.index
    offset = 0
    for j, obj in enumerate(objs):
        n = len(summands(obj))
        if offset <= k < offset + n:
            if isinstance(obj, ObSum):
                return j, Tag(k - offset, elem.value)
            return j, elem.value
        offset += n
    raise ValueError(f"tag {k} out of range for {format_object(total)}")


def carrier(obj, carriers) -> tuple:
    """Canonically ordered elements of an object.

    Products are enumerated row-major (leftmost factor slowest); sums list the
    first summand's block, then the next.
    """
    if isinstance(obj, Ob):
        return tuple(carriers[obj.name])
    if isinstance(obj, UnitI):
        return (STAR,)
    if isinstance(obj, ZeroO):
        return ()
    if isinstance(obj, ObTensor):
        return tuple(itertools.product(*(carrier(f, carriers) for f in obj.factors)))
    if isinstance(obj, ObSum):
        return tuple(Tag(i, e) for i, s in enumerate(obj.summands)
                     for e in carrier(s, carriers))
    raise TypeError(obj)


def carrier_size(obj, carriers) -> int:
    if isinstance(obj, Ob):
        return len(carriers[obj.name])
    if isinstance(obj, UnitI):
        return 1
    if isinstance(obj, ZeroO):
        return 0
    if isinstance(obj, ObTensor):
        n = 1
        for f in obj.factors:
            n *= carrier_size(f, carriers)
        return n
    return sum(carrier_size(s, carriers) for s in obj.summands)


# ---------------------------------------------------------------------------
# relations and instances

@dataclass(frozen=True)
class FinRelation:
    dom: object
    cod: object
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair):
        return pair in self.pairs

    def __le__(self, other):
        return self.pairs <= other.pairs

    def transpose(self) -> "FinRelation":
        return FinRelation(self.cod, self.dom, frozenset((y, x) for x, y in self.pairs))

    def image(self, x) -> set:
        return {b for a, b in self.pairs if a == x}


@dataclass(frozen=True)
class Instance:
    carriers: dict
    relations: dict = field(default_factory=dict)

    def carrier(self, obj):
        return carrier(normalize_object(obj), self.carriers)

    def with_relation(self, name, rel: FinRelation) -> "Instance":
        rels = dict(self.relations)
        rels[name] = rel
        return Instance(self.carriers, rels)


class InstanceError(OlogError):
    pass


def validate_instance(inst: Instance, pres: OlogPresentation) -> list:
    """Problems with carriers or relation signatures, as strings."""
    problems = []
    for t in pres.type_generators:
        if t not in inst.carriers:
            problems.append(f"missing carrier for type {t!r}")
        elif len(set(inst.carriers[t])) != len(inst.carriers[t]):
            problems.append(f"duplicate elements in carrier of {t!r}")
    if problems:
        return problems
    for name, (dom, cod) in pres.relation_generators.items():
        rel = inst.relations.get(name)
        if rel is None:
            problems.append(f"missing relation {name!r}")
            continue
        if (rel.dom, rel.cod) != (dom, cod):
            problems.append(f"relation {name!r} has signature "
                            f"{format_object(rel.dom)} -> {format_object(rel.cod)}")
            continue
        xs, ys = set(carrier(dom, inst.carriers)), set(carrier(cod, inst.carriers))
        for x, y in rel.pairs:
            if x not in xs or y not in ys:
                problems.append(f"relation {name!r} pair {(x, y)!r} outside its carriers")
                break
    return problems


# ---------------------------------------------------------------------------
# evaluation

def _diag(elems):
    return frozenset((x, x) for x in elems)


class _Evaluator:
    """Memoized evaluator.

    Leaves are computed as pair sets.  Compound nodes are evaluated by pushing
    single elements through them, so intermediate tensors never materialize
    more than the inputs that actually reach them.
    """

    _COMPOUND = (Compose, Tensor, SumTensor, Meet, Join)

    def __init__(self, inst, pres):
        self.inst = inst
        self.pres = pres
        self.c = inst.carriers
        self.memo = {}      # id(expr) -> (expr, pairs)
        self.index = {}     # id(expr) -> (expr, {x: outputs})
        self.images = {}    # id(expr) -> (expr, {x: outputs}) for compound nodes
        self.shape = {}     # id(Tensor or SumTensor) -> (expr, helpers)

    def carrier(self, obj):
        return carrier(obj, self.c)

    def pairs(self, e):
        hit = self.memo.get(id(e))
        if hit is not None:
            return hit[1]
        if isinstance(e, self._COMPOUND):
            dom, _ = infer_type(e, self.pres)
            out = frozenset((x, y) for x in self.carrier(dom) for y in self.image(e, x))
        else:
            out = self._leaf(e)
        self.memo[id(e)] = (e, out)
        return out

    def image(self, e, x):
        if isinstance(e, Top):
            return self.carrier(infer_type(e, self.pres)[1])
        if not isinstance(e, self._COMPOUND):
            hit = self.index.get(id(e))
            if hit is None:
                idx = {}
                for a, b in self.pairs(e):
                    idx.setdefault(a, set()).add(b)
                hit = self.index[id(e)] = (e, idx)
            return hit[1].get(x, ())
        hit = self.images.get(id(e))
        if hit is None:
            hit = self.images[id(e)] = (e, {})
        cache = hit[1]
        out = cache.get(x)
        if out is None:
            out = cache[x] = self._image(e, x)
        return out

    def _tensor_shape(self, e):
        hit = self.shape.get(id(e))
        if hit is None:
            types = [infer_type(p, self.pres) for p in e.parts]
            doms = [d for d, _ in types]
            cods = [c for _, c in types]
            if isinstance(e, Tensor):
                helpers = (_flattener(otensor(*doms)), [len(factors(d)) for d in doms],
                           [_builder(d) for d in doms], [_flattener(c) for c in cods],
                           _builder(otensor(*cods)))
            else:
                helpers = (doms, cods)
            hit = self.shape[id(e)] = (e, helpers)
        return hit[1]

    def _image(self, e, x):
        if isinstance(e, Compose):
            current = {x}
            for p in e.parts:
                nxt = set()
                for a in current:
                    nxt.update(self.image(p, a))
                if not nxt:
                    return frozenset()
                current = nxt
            return frozenset(current)
        if isinstance(e, Tensor):
            dflat, counts, dbuild, cflats, cbuild = self._tensor_shape(e)
            flat = dflat(x)
            outs, pos = [], 0
            for p, k, db, cf in zip(e.parts, counts, dbuild, cflats):
                ys = self.image(p, db(flat[pos:pos + k]))
                if not ys:
                    return frozenset()
                outs.append([cf(y) for y in ys])
                pos += k
            return frozenset(cbuild(sum(combo, ())) for combo in itertools.product(*outs))
        if isinstance(e, SumTensor):
            doms, cods = self._tensor_shape(e)
            j, v = split_sum(doms, x)
            return frozenset(inject(cods, j, y) for y in self.image(e.parts[j], v))
        if isinstance(e, Meet):
            return frozenset(self.image(e.left, x)) & frozenset(self.image(e.right, x))
        if isinstance(e, Join):
            return frozenset(self.image(e.left, x)) | frozenset(self.image(e.right, x))
        raise OlogError(f"cannot evaluate {e!r}")

    def _leaf(self, e):
        pres = self.pres
        if isinstance(e, Gen):
            rel = self.inst.relations.get(e.name)
            if rel is None:
                pres.signature(e.name)
                raise UnboundGenerator(e.name)
            return rel.pairs
        if isinstance(e, Id):
            return _diag(self.carrier(normalize_object(e.obj)))
        dom, cod = infer_type(e, pres)
        if isinstance(e, Braid):
            x, y = normalize_object(e.x), normalize_object(e.y)
            out = set()
            for a in self.carrier(dom):
                u, v = split_tensor([x, y], a)
                out.add((a, join_tensor([y, x], [v, u])))
            return frozenset(out)
        if isinstance(e, SumBraid):
            x, y = normalize_object(e.x), normalize_object(e.y)
            out = set()
            for a in self.carrier(dom):
                j, v = split_sum([x, y], a)
                out.add((a, inject([y, x], 1 - j, v)))
            return frozenset(out)
        if isinstance(e, Copy):
            x = dom
            return frozenset((a, join_tensor([x, x], [a, a])) for a in self.carrier(x))
        if isinstance(e, Merge):
            x = cod
            return frozenset((join_tensor([x, x], [a, a]), a) for a in self.carrier(x))
        if isinstance(e, Delete):
            return frozenset((a, STAR) for a in self.carrier(dom))
        if isinstance(e, Create):
            return frozenset((STAR, a) for a in self.carrier(cod))
        if isinstance(e, Unit):
            x = normalize_object(e.x)
            return frozenset((STAR, join_tensor([x, x], [a, a])) for a in self.carrier(x))
        if isinstance(e, Counit):
            x = normalize_object(e.x)
            return frozenset((join_tensor([x, x], [a, a]), STAR) for a in self.carrier(x))
        if isinstance(e, CoMerge):
            x = cod
            return frozenset((inject([x, x], j, a), a)
                             for a in self.carrier(x) for j in (0, 1))
        if isinstance(e, CoCopy):
            x = dom
            return frozenset((a, inject([x, x], j, a))
                             for a in self.carrier(x) for j in (0, 1))
        if isinstance(e, (CoCreate, CoDelete, Bottom)):
            return frozenset()
        if isinstance(e, Top):
            return frozenset(itertools.product(self.carrier(dom), self.carrier(cod)))
        if isinstance(e, Dagger):
            return frozenset((y, x) for x, y in self.pairs(e.inner))
        if isinstance(e, (Distribute, DistributeInv)):
            x, y, z = (normalize_object(o) for o in (e.x, e.y, e.z))
            yz = osum(y, z)
            out = set()
            for a in self.carrier(otensor(x, yz)):
                u, s = split_tensor([x, yz], a)
                j, v = split_sum([y, z], s)
                b = inject([otensor(x, y), otensor(x, z)], j,
                           join_tensor([x, (y, z)[j]], [u, v]))
                out.add((a, b) if isinstance(e, Distribute) else (b, a))
            return frozenset(out)
        raise OlogError(f"cannot evaluate {e!r}")


def eval_expr(expr, inst: Instance, pres: OlogPresentation) -> FinRelation:
    """Evaluate a morphism expression to a finite relation."""
    dom, cod = infer_type(expr, pres)
    return FinRelation(dom, cod, _Evaluator(inst, pres).pairs(expr))


# ``eval`` is the public name; the alias keeps the builtin usable inside this module.
eval = eval_expr  # noqa: A001


# ---------------------------------------------------------------------------
# checking

@dataclass
class Violation:
    index: int
    axiom: object
    witness: tuple


@dataclass
class ViolationReport:
    checked: int
    violations: list

    @property
    def ok(self):
        return not self.violations

    def __len__(self):
        return len(self.violations)


def _canonical_first(pairs, dom, cod, carriers):
    order_x = {x: i for i, x in enumerate(carrier(dom, carriers))}
    order_y = {y: i for i, y in enumerate(carrier(cod, carriers))}
    return min(pairs, key=lambda p: (order_x.get(p[0], -1), order_y.get(p[1], -1)))


def check_instance(inst: Instance, pres: OlogPresentation, first_only=False) -> ViolationReport:
    """Check every axiom ``lhs => rhs`` as a containment of evaluated relations.

    Each violation carries the canonically least witness pair.
    """
    ev = _Evaluator(inst, pres)
    violations = []
    for i, ax in enumerate(pres.axioms):
        extra = ev.pairs(ax.lhs) - ev.pairs(ax.rhs)
        if extra:
            dom, cod = infer_type(ax.lhs, pres)
            violations.append(Violation(i, ax, _canonical_first(extra, dom, cod, inst.carriers)))
            if first_only:
                break
    return ViolationReport(len(pres.axioms), violations)


def satisfies(inst: Instance, pres: OlogPresentation) -> bool:
    return check_instance(inst, pres, first_only=True).ok


def subsumption_witness(inst, lhs, rhs, pres):
    """None if ``lhs => rhs`` holds in ``inst``, otherwise a witness pair."""
    lt, rt = infer_type(lhs, pres), infer_type(rhs, pres)
    if lt != rt:
        raise SignatureMismatch(lt, rt)
    ev = _Evaluator(inst, pres)
    extra = ev.pairs(lhs) - ev.pairs(rhs)
    if not extra:
        return None
    return _canonical_first(extra, lt[0], lt[1], inst.carriers)


def subsumes(inst: Instance, lhs, rhs, pres: OlogPresentation) -> bool:
    return subsumption_witness(inst, lhs, rhs, pres) is None


@dataclass(frozen=True)
class MapKind:
    partial_function: bool
    total: bool
    injective: bool
    surjective: bool

    @property
    def is_function(self):
        return self.partial_function and self.total


def classify_map(rel: FinRelation, carriers) -> MapKind:
    """Functional properties of a relation relative to its carriers."""
    xs = carrier(rel.dom, carriers)
    ys = carrier(rel.cod, carriers)
    out_deg = {x: 0 for x in xs}
    in_deg = {y: 0 for y in ys}
    for x, y in rel.pairs:
        out_deg[x] += 1
        in_deg[y] += 1
    return MapKind(
        partial_function=all(d <= 1 for d in out_deg.values()),
        total=all(d >= 1 for d in out_deg.values()),
        injective=all(d <= 1 for d in in_deg.values()),
        surjective=all(d >= 1 for d in in_deg.values()),
    )


def empty_instance(pres: OlogPresentation) -> Instance:
    carriers = {t: () for t in pres.type_generators}
    rels = {n: FinRelation(d, c, frozenset()) for n, (d, c) in pres.relation_generators.items()}
    return Instance(carriers, rels)
