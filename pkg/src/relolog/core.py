"""Object and morphism syntax for relational ologs.

Objects and morphisms are immutable dataclasses.  Monoidal coherence is handled
by strictification: tensors and sums of objects are flattened n-ary sequences
with units removed, so ``A * (B * C)`` and ``(A * B) * C`` are the same value.
"""
from __future__ import annotations

import functools

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class OlogError(Exception):
    """Base class for errors raised while typechecking or evaluating."""


class UnknownGenerator(OlogError):
    def __init__(self, name: str):
        super().__init__(f"unknown generator {name!r}")
        self.name = name


class CompositionMismatch(OlogError):
    def __init__(self, position: int, expected, found):
        super().__init__(
            f"composition mismatch at position {position}: "
            f"expected {format_object(expected)}, found {format_object(found)}")
        self.position = position
        self.expected = expected
        self.found = found


class SignatureMismatch(OlogError):
    def __init__(self, left, right, what: str = "signature"):
        super().__init__(
            f"{what} mismatch: {format_signature(left)} vs {format_signature(right)}")
        self.left = left
        self.right = right


class DistributiveSyntaxError(OlogError):
    """Sum syntax used in a presentation that is not flagged distributive."""


# ---------------------------------------------------------------------------
# Objects

@dataclass(frozen=True)
class Ob:
    name: str


@dataclass(frozen=True)
class ObTensor:
    factors: tuple


@dataclass(frozen=True)
class UnitI:
    pass


@dataclass(frozen=True)
class ObSum:
    summands: tuple


@dataclass(frozen=True)
class ZeroO:
    pass


Object = Union[Ob, ObTensor, UnitI, ObSum, ZeroO]

I = UnitI()
O = ZeroO()


@functools.lru_cache(maxsize=None)
def normalize_object(obj: Object) -> Object:
    if isinstance(obj, ObTensor):
        flat = []
        for f in obj.factors:
            f = normalize_object(f)
            if isinstance(f, ObTensor):
                flat.extend(f.factors)
            elif not isinstance(f, UnitI):
                flat.append(f)
        if not flat:
            return I
        return flat[0] if len(flat) == 1 else ObTensor(tuple(flat))
    if isinstance(obj, ObSum):
        flat = []
        for s in obj.summands:
            s = normalize_object(s)
            if isinstance(s, ObSum):
                flat.extend(s.summands)
            elif not isinstance(s, ZeroO):
                flat.append(s)
        if not flat:
            return O
        return flat[0] if len(flat) == 1 else ObSum(tuple(flat))
    return obj


@functools.lru_cache(maxsize=None)
def otensor(*objs: Object) -> Object:
    return normalize_object(ObTensor(tuple(objs)))


@functools.lru_cache(maxsize=None)
def osum(*objs: Object) -> Object:
    return normalize_object(ObSum(tuple(objs)))


@functools.lru_cache(maxsize=None)
def factors(obj: Object) -> tuple:
    """Tensor factors of a normalized object (empty for the unit)."""
    if isinstance(obj, UnitI):
        return ()
    if isinstance(obj, ObTensor):
        return obj.factors
    return (obj,)


@functools.lru_cache(maxsize=None)
def summands(obj: Object) -> tuple:
    """Sum summands of a normalized object (empty for the zero object)."""
    if isinstance(obj, ZeroO):
        return ()
    if isinstance(obj, ObSum):
        return obj.summands
    return (obj,)


def object_generators(obj: Object) -> Iterator[str]:
    if isinstance(obj, Ob):
        yield obj.name
    elif isinstance(obj, ObTensor):
        for f in obj.factors:
            yield from object_generators(f)
    elif isinstance(obj, ObSum):
        for s in obj.summands:
            yield from object_generators(s)


def uses_sums(obj: Object) -> bool:
    if isinstance(obj, (ObSum, ZeroO)):
        return True
    if isinstance(obj, ObTensor):
        return any(uses_sums(f) for f in obj.factors)
    return False


# ---------------------------------------------------------------------------
# Morphisms

class Morphism:
    """Mixin giving morphism expressions operator sugar."""

    def __rshift__(self, other):
        return Compose((self, other))

    def __matmul__(self, other):
        return Tensor((self, other))

    def __add__(self, other):
        return SumTensor((self, other))


@dataclass(frozen=True)
class Gen(Morphism):
    name: str


@dataclass(frozen=True)
class Id(Morphism):
    obj: Object


@dataclass(frozen=True)
class Compose(Morphism):
    parts: tuple


@dataclass(frozen=True)
class Tensor(Morphism):
    parts: tuple


@dataclass(frozen=True)
class Braid(Morphism):
    x: Object
    y: Object


@dataclass(frozen=True)
class Copy(Morphism):
    x: Object


@dataclass(frozen=True)
class Delete(Morphism):
    x: Object


@dataclass(frozen=True)
class Merge(Morphism):
    x: Object


@dataclass(frozen=True)
class Create(Morphism):
    x: Object


@dataclass(frozen=True)
class Dagger(Morphism):
    inner: Morphism


@dataclass(frozen=True)
class Unit(Morphism):
    x: Object


@dataclass(frozen=True)
class Counit(Morphism):
    x: Object


@dataclass(frozen=True)
class Meet(Morphism):
    left: Morphism
    right: Morphism


@dataclass(frozen=True)
class Top(Morphism):
    dom: Object
    cod: Object


# distributive-only constructors

@dataclass(frozen=True)
class SumTensor(Morphism):
    parts: tuple


@dataclass(frozen=True)
class SumBraid(Morphism):
    x: Object
    y: Object


@dataclass(frozen=True)
class CoMerge(Morphism):
    """Codiagonal merge X + X -> X."""
    x: Object


@dataclass(frozen=True)
class CoCreate(Morphism):
    """The empty relation O -> X."""
    x: Object


@dataclass(frozen=True)
class CoCopy(Morphism):
    x: Object


@dataclass(frozen=True)
class CoDelete(Morphism):
    x: Object


@dataclass(frozen=True)
class Join(Morphism):
    left: Morphism
    right: Morphism


@dataclass(frozen=True)
class Bottom(Morphism):
    dom: Object
    cod: Object


@dataclass(frozen=True)
class Distribute(Morphism):
    """X * (Y + Z) -> (X * Y) + (X * Z)."""
    x: Object
    y: Object
    z: Object


@dataclass(frozen=True)
class DistributeInv(Morphism):
    x: Object
    y: Object
    z: Object


DISTRIBUTIVE_KINDS = (SumTensor, SumBraid, CoMerge, CoCreate, CoCopy, CoDelete,
                      Join, Bottom, Distribute, DistributeInv)
DERIVED_KINDS = (Meet, Join, Top, Bottom, Unit, Counit, Dagger)
STRUCTURAL_1 = (Id, Copy, Delete, Merge, Create, Unit, Counit,
                CoMerge, CoCreate, CoCopy, CoDelete)


def compose(*parts) -> Morphism:
    return parts[0] if len(parts) == 1 else Compose(tuple(parts))


def tensor(*parts) -> Morphism:
    return parts[0] if len(parts) == 1 else Tensor(tuple(parts))


def children(expr) -> tuple:
    if isinstance(expr, (Compose, Tensor, SumTensor)):
        return expr.parts
    if isinstance(expr, Dagger):
        return (expr.inner,)
    if isinstance(expr, (Meet, Join)):
        return (expr.left, expr.right)
    return ()


def generators_of(expr) -> set:
    if isinstance(expr, Gen):
        return {expr.name}
    out = set()
    for c in children(expr):
        out |= generators_of(c)
    return out


def objects_of(expr) -> list:
    """Object arguments carried directly by a node."""
    if isinstance(expr, (Id,)):
        return [expr.obj]
    if isinstance(expr, (Braid, SumBraid)):
        return [expr.x, expr.y]
    if isinstance(expr, (Top, Bottom)):
        return [expr.dom, expr.cod]
    if isinstance(expr, (Distribute, DistributeInv)):
        return [expr.x, expr.y, expr.z]
    if hasattr(expr, "x") and not isinstance(expr, (Braid, SumBraid)):
        return [expr.x]
    return []


def depth(expr) -> int:
    cs = children(expr)
    return 1 + max((depth(c) for c in cs), default=0)


# ---------------------------------------------------------------------------
# Presentations

@dataclass(frozen=True)
class Axiom:
    """A subsumption ``lhs => rhs``."""
    lhs: Morphism
    rhs: Morphism


@dataclass(frozen=True)
class OlogPresentation:
    type_generators: tuple
    relation_generators: dict
    axioms: tuple = ()
    distributive: bool = False
    definitions: dict = field(default_factory=dict)
    name: str = ""
    _types: dict = field(default_factory=dict, compare=False, repr=False)

    def signature(self, name: str) -> tuple:
        try:
            return self.relation_generators[name]
        except KeyError:
            raise UnknownGenerator(name) from None

    @staticmethod
    def build(types: Iterable[str], relations: dict, axioms=(), distributive=False,
              definitions=None, name=""):
        rels = {k: (normalize_object(d), normalize_object(c))
                for k, (d, c) in relations.items()}
        return OlogPresentation(tuple(types), rels, tuple(axioms), distributive,
                                dict(definitions or {}), name)

    def with_axioms(self, axioms) -> "OlogPresentation":
        return OlogPresentation(self.type_generators, self.relation_generators,
                                tuple(axioms), self.distributive, self.definitions,
                                self.name)


def equality_axioms(lhs, rhs) -> tuple:
    """An equation is shorthand for two subsumptions."""
    return (Axiom(lhs, rhs), Axiom(rhs, lhs))


# ---------------------------------------------------------------------------
# Typechecking

def _check_object(obj, pres: OlogPresentation):
    for name in object_generators(obj):
        if name not in pres.type_generators:
            raise UnknownGenerator(name)
    if not pres.distributive and uses_sums(obj):
        raise DistributiveSyntaxError(
            f"sum object {format_object(obj)} in a non-distributive presentation")
    return normalize_object(obj)


def infer_type(expr, pres: OlogPresentation) -> tuple:
    """Return the normalized ``(dom, cod)`` of a morphism expression."""
    cache = pres._types
    try:
        return cache[expr]
    except (KeyError, TypeError):
        pass
    result = _infer(expr, pres)
    cache[expr] = result
    return result


def _infer(expr, pres):
    if isinstance(expr, DISTRIBUTIVE_KINDS) and not pres.distributive:
        raise DistributiveSyntaxError(
            f"{type(expr).__name__} requires a distributive presentation")
    obj = lambda o: _check_object(o, pres)  # noqa: E731
    if isinstance(expr, Gen):
        return pres.signature(expr.name)
    if isinstance(expr, Id):
        x = obj(expr.obj)
        return x, x
    if isinstance(expr, Compose):
        if not expr.parts:
            raise OlogError("empty composition")
        dom, cod = infer_type(expr.parts[0], pres)
        for i, part in enumerate(expr.parts[1:], start=1):
            d, c = infer_type(part, pres)
            if d != cod:
                raise CompositionMismatch(i, cod, d)
            cod = c
        return dom, cod
    if isinstance(expr, (Tensor, SumTensor)):
        types = [infer_type(p, pres) for p in expr.parts]
        join = otensor if isinstance(expr, Tensor) else osum
        return join(*(d for d, _ in types)), join(*(c for _, c in types))
    if isinstance(expr, Braid):
        x, y = obj(expr.x), obj(expr.y)
        return otensor(x, y), otensor(y, x)
    if isinstance(expr, SumBraid):
        x, y = obj(expr.x), obj(expr.y)
        return osum(x, y), osum(y, x)
    if isinstance(expr, Copy):
        x = obj(expr.x)
        return x, otensor(x, x)
    if isinstance(expr, Merge):
        x = obj(expr.x)
        return otensor(x, x), x
    if isinstance(expr, Delete):
        return obj(expr.x), I
    if isinstance(expr, Create):
        return I, obj(expr.x)
    if isinstance(expr, Unit):
        x = obj(expr.x)
        return I, otensor(x, x)
    if isinstance(expr, Counit):
        x = obj(expr.x)
        return otensor(x, x), I
    if isinstance(expr, CoCopy):
        x = obj(expr.x)
        return x, osum(x, x)
    if isinstance(expr, CoMerge):
        x = obj(expr.x)
        return osum(x, x), x
    if isinstance(expr, CoDelete):
        return obj(expr.x), O
    if isinstance(expr, CoCreate):
        return O, obj(expr.x)
    if isinstance(expr, Dagger):
        d, c = infer_type(expr.inner, pres)
        return c, d
    if isinstance(expr, (Meet, Join)):
        left = infer_type(expr.left, pres)
        right = infer_type(expr.right, pres)
        if left != right:
            raise SignatureMismatch(left, right)
        return left
    if isinstance(expr, (Top, Bottom)):
        return obj(expr.dom), obj(expr.cod)
    if isinstance(expr, Distribute):
        x, y, z = obj(expr.x), obj(expr.y), obj(expr.z)
        return otensor(x, osum(y, z)), osum(otensor(x, y), otensor(x, z))
    if isinstance(expr, DistributeInv):
        x, y, z = obj(expr.x), obj(expr.y), obj(expr.z)
        return osum(otensor(x, y), otensor(x, z)), otensor(x, osum(y, z))
    raise OlogError(f"not a morphism expression: {expr!r}")


# ---------------------------------------------------------------------------
# Desugaring and strict normalization

def unit_core(x) -> Morphism:
    return Compose((Create(x), Copy(x)))


def counit_core(x) -> Morphism:
    return Compose((Merge(x), Delete(x)))


def desugar(expr, pres: OlogPresentation) -> Morphism:
    """Expand derived constructors into core ones."""
    if isinstance(expr, Meet):
        x, y = infer_type(expr, pres)
        return Compose((Copy(x), Tensor((desugar(expr.left, pres),
                                         desugar(expr.right, pres))), Merge(y)))
    if isinstance(expr, Join):
        x, y = infer_type(expr, pres)
        return Compose((CoCopy(x), SumTensor((desugar(expr.left, pres),
                                              desugar(expr.right, pres))), CoMerge(y)))
    if isinstance(expr, Top):
        return Compose((Delete(expr.dom), Create(expr.cod)))
    if isinstance(expr, Bottom):
        return Compose((CoDelete(expr.dom), CoCreate(expr.cod)))
    if isinstance(expr, Unit):
        return unit_core(expr.x)
    if isinstance(expr, Counit):
        return counit_core(expr.x)
    if isinstance(expr, Dagger):
        x, y = infer_type(expr.inner, pres)
        inner = desugar(expr.inner, pres)
        return Compose((
            Tensor((unit_core(x), Id(y))),
            Tensor((Id(x), inner, Id(y))),
            Tensor((Id(x), counit_core(y))),
        ))
    if isinstance(expr, Compose):
        return Compose(tuple(desugar(p, pres) for p in expr.parts))
    if isinstance(expr, Tensor):
        return Tensor(tuple(desugar(p, pres) for p in expr.parts))
    if isinstance(expr, SumTensor):
        return SumTensor(tuple(desugar(p, pres) for p in expr.parts))
    return expr


def is_core(expr) -> bool:
    if isinstance(expr, DERIVED_KINDS):
        return False
    return all(is_core(c) for c in children(expr))


def _normalize_node_objects(expr):
    n = normalize_object
    if isinstance(expr, Id):
        return Id(n(expr.obj))
    if isinstance(expr, (Braid, SumBraid)):
        return type(expr)(n(expr.x), n(expr.y))
    if isinstance(expr, (Top, Bottom)):
        return type(expr)(n(expr.dom), n(expr.cod))
    if isinstance(expr, (Distribute, DistributeInv)):
        return type(expr)(n(expr.x), n(expr.y), n(expr.z))
    if isinstance(expr, (Copy, Delete, Merge, Create, Unit, Counit,
                         CoMerge, CoCreate, CoCopy, CoDelete)):
        return type(expr)(n(expr.x))
    return expr


def normalize_strict(expr) -> Morphism:
    """Flatten composites and products, dropping identities and unit factors."""
    if isinstance(expr, Compose):
        flat = []
        for p in expr.parts:
            p = normalize_strict(p)
            if isinstance(p, Compose):
                flat.extend(p.parts)
            else:
                flat.append(p)
        kept = [p for p in flat if not isinstance(p, Id)]
        if not kept:
            return flat[0]
        return kept[0] if len(kept) == 1 else Compose(tuple(kept))
    if isinstance(expr, (Tensor, SumTensor)):
        nested, unit = (Tensor, I) if isinstance(expr, Tensor) else (SumTensor, O)
        join = otensor if nested is Tensor else osum
        flat = []
        for p in expr.parts:
            p = normalize_strict(p)
            if isinstance(p, nested):
                flat.extend(p.parts)
            elif not (isinstance(p, Id) and p.obj == unit):
                flat.append(p)
        if not flat:
            return Id(unit)
        if all(isinstance(p, Id) for p in flat):
            return Id(join(*(p.obj for p in flat)))
        return flat[0] if len(flat) == 1 else nested(tuple(flat))
    if isinstance(expr, Dagger):
        return Dagger(normalize_strict(expr.inner))
    if isinstance(expr, (Meet, Join)):
        return type(expr)(normalize_strict(expr.left), normalize_strict(expr.right))
    return _normalize_node_objects(expr)


# ---------------------------------------------------------------------------
# Validation

@dataclass
class ReportEntry:
    kind: str
    label: str
    ok: bool
    message: str = ""


@dataclass
class ValidationReport:
    entries: list

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def errors(self) -> list:
        return [e for e in self.entries if not e.ok]

    def __str__(self):
        lines = []
        for e in self.entries:
            status = "ok" if e.ok else "FAIL"
            lines.append(f"{status}\t{e.kind}\t{e.label}" + (f"\t{e.message}" if e.message else ""))
        return "\n".join(lines)


def validate_presentation(pres: OlogPresentation) -> ValidationReport:
    entries = []
    seen = set()
    for t in pres.type_generators:
        ok = t not in seen
        entries.append(ReportEntry("type", t, ok, "" if ok else "duplicate name"))
        seen.add(t)
    for name, (dom, cod) in pres.relation_generators.items():
        msg = ""
        if name in seen:
            msg = "duplicate name"
        else:
            try:
                _check_object(dom, pres)
                _check_object(cod, pres)
            except OlogError as exc:
                msg = str(exc)
        seen.add(name)
        entries.append(ReportEntry("relation", name, not msg, msg))
    for i, ax in enumerate(pres.axioms):
        label = f"axiom {i}: {format_expr(ax.lhs)} => {format_expr(ax.rhs)}"
        try:
            lt = infer_type(ax.lhs, pres)
            rt = infer_type(ax.rhs, pres)
        except OlogError as exc:
            entries.append(ReportEntry("axiom", label, False, str(exc)))
            continue
        if lt[0] != rt[0]:
            entries.append(ReportEntry("axiom", label, False,
                                       f"domain {format_object(lt[0])} != {format_object(rt[0])}"))
        elif lt[1] != rt[1]:
            entries.append(ReportEntry("axiom", label, False,
                                       f"codomain {format_object(lt[1])} != {format_object(rt[1])}"))
        else:
            entries.append(ReportEntry("axiom", label, True))
    return ValidationReport(entries)


# ---------------------------------------------------------------------------
# Printing (canonical text forms; the parser lives in relolog.text)

_KEYWORDS = {
    "compose", "tensor", "sum", "meet", "join", "dagger", "id", "copy", "delete",
    "merge", "create", "braid", "top", "bottom", "unit", "counit", "sumbraid",
    "comerge", "cocreate", "cocopy", "codelete", "distribute", "distribute_inv",
    "I", "O",
}


def format_name(name: str) -> str:
    if name.isidentifier() and name not in _KEYWORDS and name not in _RESERVED_WORDS:
        return name
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


_RESERVED_WORDS = {
    "type", "rel", "axiom", "def", "olog", "distributive", "true", "false", "exists",
    "fun", "theory", "regular", "coherent", "proof", "case", "pi1", "pi2", "in1", "in2",
    "inl", "inr", "map", "dim", "span",
}


def format_object(obj) -> str:
    if isinstance(obj, tuple) and len(obj) == 2:
        return format_signature(obj)
    if isinstance(obj, Ob):
        return format_name(obj.name)
    if isinstance(obj, UnitI):
        return "I"
    if isinstance(obj, ZeroO):
        return "O"
    if isinstance(obj, ObTensor):
        return " * ".join(
            f"({format_object(f)})" if isinstance(f, ObSum) else format_object(f)
            for f in obj.factors)
    if isinstance(obj, ObSum):
        return " + ".join(format_object(s) for s in obj.summands)
    return repr(obj)


def format_signature(sig) -> str:
    dom, cod = sig
    return f"{format_object(dom)} -> {format_object(cod)}"


_OBJ_NODES = {
    Id: "id", Copy: "copy", Delete: "delete", Merge: "merge", Create: "create",
    Unit: "unit", Counit: "counit", CoMerge: "comerge", CoCreate: "cocreate",
    CoCopy: "cocopy", CoDelete: "codelete",
}


def format_expr(expr) -> str:
    """Canonical prefix text of a morphism expression."""
    if isinstance(expr, Gen):
        return format_name(expr.name)
    if isinstance(expr, Compose):
        return "compose(" + ", ".join(format_expr(p) for p in expr.parts) + ")"
    if isinstance(expr, Tensor):
        return "tensor(" + ", ".join(format_expr(p) for p in expr.parts) + ")"
    if isinstance(expr, SumTensor):
        return "sum(" + ", ".join(format_expr(p) for p in expr.parts) + ")"
    if isinstance(expr, Dagger):
        return f"dagger({format_expr(expr.inner)})"
    if isinstance(expr, Meet):
        return f"meet({format_expr(expr.left)}, {format_expr(expr.right)})"
    if isinstance(expr, Join):
        return f"join({format_expr(expr.left)}, {format_expr(expr.right)})"
    if isinstance(expr, Id):
        return f"id({format_object(expr.obj)})"
    if type(expr) in _OBJ_NODES:
        return f"{_OBJ_NODES[type(expr)]}({format_object(expr.x)})"
    if isinstance(expr, Braid):
        return f"braid({format_object(expr.x)}, {format_object(expr.y)})"
    if isinstance(expr, SumBraid):
        return f"sumbraid({format_object(expr.x)}, {format_object(expr.y)})"
    if isinstance(expr, Top):
        return f"top({format_object(expr.dom)}, {format_object(expr.cod)})"
    if isinstance(expr, Bottom):
        return f"bottom({format_object(expr.dom)}, {format_object(expr.cod)})"
    if isinstance(expr, Distribute):
        return f"distribute({format_object(expr.x)}, {format_object(expr.y)}, {format_object(expr.z)})"
    if isinstance(expr, DistributeInv):
        return f"distribute_inv({format_object(expr.x)}, {format_object(expr.y)}, {format_object(expr.z)})"
    raise OlogError(f"cannot format {expr!r}")
