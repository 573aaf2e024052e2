"""Text formats for objects, morphism expressions, ologs and instances.

Expression grammar (``;`` binds loosest, then ``+``, then ``*``)::

    expr   := sumexp (";" sumexp)*
    sumexp := prod ("+" prod)*
    prod   := atom ("*" atom)*
    atom   := NAME | STRING | KEYWORD "(" args ")" | "(" expr ")"

Keywords are the constructor names (``compose``, ``tensor``, ``sum``, ``meet``,
``join``, ``dagger``, ``id``, ``copy``, ...).  Generator names that clash with a
keyword or contain spaces are written in double quotes.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .core import (
    I, O, Axiom, Ob, ObSum, ObTensor, OlogPresentation, UnitI,
    equality_axioms, format_expr, format_name, format_object,
    normalize_object,
    Braid, Bottom, CoCopy, CoCreate, CoDelete, CoMerge, Compose, Copy, Counit,
    Create, Dagger, Delete, Distribute, DistributeInv, Gen, Id, Join, Meet, Merge,
    SumBraid, SumTensor, Tensor, Top, Unit,
)
from .finrel import FinRelation, Instance, Tag, carrier
from .lexer import ParseError, TokenStream
from .linrel import LinearInstance, LinRel

_ONE_OBJ = {
    "id": Id, "copy": Copy, "delete": Delete, "merge": Merge, "create": Create,
    "unit": Unit, "counit": Counit, "comerge": CoMerge, "cocreate": CoCreate,
    "cocopy": CoCopy, "codelete": CoDelete,
}
_TWO_OBJ = {"braid": Braid, "sumbraid": SumBraid, "top": Top, "bottom": Bottom}
_THREE_OBJ = {"distribute": Distribute, "distribute_inv": DistributeInv}
_NARY = {"compose": Compose, "tensor": Tensor, "sum": SumTensor}
_BINARY = {"meet": Meet, "join": Join}
_BARE_ATOM = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*")


# ---------------------------------------------------------------------------
# objects and expressions

def _object(ts: TokenStream):
    parts = [_object_prod(ts)]
    while ts.accept("+"):
        parts.append(_object_prod(ts))
    return parts[0] if len(parts) == 1 else ObSum(tuple(parts))


def _object_prod(ts):
    parts = [_object_atom(ts)]
    while ts.accept("*"):
        parts.append(_object_atom(ts))
    return parts[0] if len(parts) == 1 else ObTensor(tuple(parts))


def _object_atom(ts):
    if ts.accept("("):
        obj = _object(ts)
        ts.expect(")")
        return obj
    t = ts.tok
    if t.kind == "NAME" and t.text == "I":
        ts.advance()
        return I
    if t.kind == "NAME" and t.text == "O":
        ts.advance()
        return O
    return Ob(ts.name("an object"))


def parse_object(text: str):
    ts = TokenStream(text)
    obj = normalize_object(_object(ts))
    ts.expect_end()
    return obj


class _ExprParser:
    def __init__(self, ts: TokenStream, definitions=None):
        self.ts = ts
        self.defs = definitions or {}

    def expr(self):
        parts = [self.sumexp()]
        while self.ts.accept(";"):
            parts.append(self.sumexp())
        return parts[0] if len(parts) == 1 else Compose(tuple(parts))

    def sumexp(self):
        parts = [self.prod()]
        while self.ts.accept("+"):
            parts.append(self.prod())
        return parts[0] if len(parts) == 1 else SumTensor(tuple(parts))

    def prod(self):
        parts = [self.atom()]
        while self.ts.accept("*"):
            parts.append(self.atom())
        return parts[0] if len(parts) == 1 else Tensor(tuple(parts))

    def _obj(self):
        return normalize_object(_object(self.ts))

    def atom(self):
        ts = self.ts
        if ts.accept("("):
            e = self.expr()
            ts.expect(")")
            return e
        t = ts.tok
        if t.kind == "NAME" and ts.peek().kind == "SYM" and ts.peek().text == "(":
            word = t.text
            if word in _NARY or word in _BINARY or word == "dagger" or word in _ONE_OBJ \
                    or word in _TWO_OBJ or word in _THREE_OBJ:
                ts.advance()
                ts.expect("(")
                node = self._constructor(word)
                ts.expect(")")
                return node
        name = ts.name("a morphism expression")
        if name in self.defs:
            return self.defs[name]
        return Gen(name)

    def _constructor(self, word):
        ts = self.ts
        if word in _NARY:
            parts = [self.expr()]
            while ts.accept(","):
                parts.append(self.expr())
            return _NARY[word](tuple(parts))
        if word in _BINARY:
            left = self.expr()
            ts.expect(",")
            return _BINARY[word](left, self.expr())
        if word == "dagger":
            return Dagger(self.expr())
        if word in _ONE_OBJ:
            return _ONE_OBJ[word](self._obj())
        objs = [self._obj()]
        while ts.accept(","):
            objs.append(self._obj())
        cls = _TWO_OBJ.get(word) or _THREE_OBJ[word]
        want = 2 if word in _TWO_OBJ else 3
        if len(objs) != want:
            ts.fail(f"{want} object arguments to {word}")
        return cls(*objs)


def parse_expr(text: str, pres: OlogPresentation | None = None):
    ts = TokenStream(text)
    e = _ExprParser(ts, pres.definitions if pres else None).expr()
    ts.expect_end()
    return e


def parse_conjecture(text: str, pres: OlogPresentation | None = None):
    """``lhs => rhs`` as a pair of expressions."""
    ts = TokenStream(text)
    p = _ExprParser(ts, pres.definitions if pres else None)
    lhs = p.expr()
    ts.expect("=>")
    rhs = p.expr()
    ts.expect_end()
    return lhs, rhs


# ---------------------------------------------------------------------------
# olog files

def parse_olog(text: str) -> OlogPresentation:
    """Parse an olog presentation.

    Statements: ``olog NAME``, ``distributive``, ``type A, B``,
    ``rel R : X -> Y``, ``def name := expr``, ``axiom lhs => rhs`` and
    ``axiom lhs == rhs`` (two subsumptions).
    """
    ts = TokenStream(text)
    name = ""
    distributive = False
    types, rels, axioms, defs = [], {}, [], {}
    while not ts.at_end():
        t = ts.tok
        if t.kind != "NAME":
            ts.fail("a statement keyword")
        kw = t.text
        ts.advance()
        if kw == "olog":
            name = ts.name()
        elif kw == "distributive":
            distributive = True
        elif kw == "type":
            types.append(ts.name("a type name"))
            while ts.accept(","):
                types.append(ts.name("a type name"))
        elif kw == "rel":
            r = ts.name("a relation name")
            ts.expect(":")
            dom = normalize_object(_object(ts))
            ts.expect("->")
            cod = normalize_object(_object(ts))
            if r in rels:
                raise ParseError(t.line, t.col, "a fresh relation name", repr(r))
            rels[r] = (dom, cod)
        elif kw == "def":
            d = ts.name("a definition name")
            if d in rels or d in defs:
                raise ParseError(t.line, t.col, "a fresh definition name", repr(d))
            ts.expect(":=")
            defs[d] = _ExprParser(ts, defs).expr()
        elif kw == "axiom":
            p = _ExprParser(ts, defs)
            lhs = p.expr()
            if ts.accept("=>"):
                axioms.append(Axiom(lhs, p.expr()))
            elif ts.accept("=="):
                axioms.extend(equality_axioms(lhs, p.expr()))
            else:
                ts.fail("'=>' or '=='")
        else:
            raise ParseError(t.line, t.col, "a statement keyword", repr(kw))
    return OlogPresentation.build(types, rels, axioms, distributive, defs, name)


def print_olog(pres: OlogPresentation) -> str:
    lines = []
    if pres.name:
        lines.append(f"olog {format_name(pres.name)}")
    if pres.distributive:
        lines.append("distributive")
    for t in pres.type_generators:
        lines.append(f"type {format_name(t)}")
    for r, (dom, cod) in pres.relation_generators.items():
        lines.append(f"rel {format_name(r)} : {format_object(dom)} -> {format_object(cod)}")
    for d, body in pres.definitions.items():
        lines.append(f"def {format_name(d)} := {format_expr(body)}")
    for ax in pres.axioms:
        lines.append(f"axiom {format_expr(ax.lhs)} => {format_expr(ax.rhs)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# elements and instances

def _raw_element(ts: TokenStream):
    if ts.accept("("):
        items = []
        if not ts.at(")"):
            items.append(_raw_element(ts))
            while ts.accept(","):
                items.append(_raw_element(ts))
        ts.expect(")")
        return tuple(items)
    t = ts.tok
    if t.kind == "NAME" and ts.peek().kind == "SYM" and ts.peek().text == "(":
        word = t.text
        idx = None
        if word == "inl":
            idx = 0
        elif word == "inr":
            idx = 1
        elif word.startswith("in") and word[2:].isdigit() and int(word[2:]) >= 1:
            idx = int(word[2:]) - 1
        if idx is not None:
            ts.advance()
            ts.expect("(")
            inner = _raw_element(ts)
            ts.expect(")")
            return Tag(idx, inner)
    return ts.name("an element")


def _coerce(raw, obj, where):
    """Check a parsed element against an object, returning the canonical element."""
    if isinstance(obj, Ob):
        if isinstance(raw, str):
            return raw
    elif isinstance(obj, UnitI):
        if raw == ():
            return ()
    elif isinstance(obj, ObTensor):
        if isinstance(raw, tuple) and len(raw) == len(obj.factors):
            return tuple(_coerce(r, f, where) for r, f in zip(raw, obj.factors))
    elif isinstance(obj, ObSum):
        if isinstance(raw, Tag) and raw.index < len(obj.summands):
            return Tag(raw.index, _coerce(raw.value, obj.summands[raw.index], where))
    raise ParseError(*where, f"an element of {format_object(obj)}", repr(raw))


def parse_element(text: str, obj):
    ts = TokenStream(text)
    raw = _raw_element(ts)
    ts.expect_end()
    return _coerce(raw, normalize_object(obj), (1, 1))


def parse_instance(text: str, pres: OlogPresentation) -> Instance:
    """Parse ``type X = {a, b}`` and ``rel R = {(x, y), ...}`` statements.

    Relations not mentioned are empty; carriers not mentioned are empty.
    """
    ts = TokenStream(text)
    carriers = {t: () for t in pres.type_generators}
    pending = []
    while not ts.at_end():
        t = ts.tok
        if t.kind != "NAME" or t.text not in ("type", "rel"):
            ts.fail("'type' or 'rel'")
        ts.advance()
        name = ts.name()
        ts.expect("=")
        ts.expect("{")
        items = []
        if not ts.at("}"):
            while True:
                where = (ts.tok.line, ts.tok.col)
                items.append((_raw_element(ts), where))
                if not ts.accept(","):
                    break
        ts.expect("}")
        if t.text == "type":
            if name not in carriers:
                raise ParseError(t.line, t.col, "a declared type", repr(name))
            atoms = []
            for raw, where in items:
                if not isinstance(raw, str):
                    raise ParseError(*where, "an atom", repr(raw))
                atoms.append(raw)
            carriers[name] = tuple(atoms)
        else:
            if name not in pres.relation_generators:
                raise ParseError(t.line, t.col, "a declared relation", repr(name))
            pending.append((name, items, (t.line, t.col)))
    rels = {n: FinRelation(d, c, frozenset()) for n, (d, c) in pres.relation_generators.items()}
    for name, items, site in pending:
        dom, cod = pres.relation_generators[name]
        xs, ys = set(carrier(dom, carriers)), set(carrier(cod, carriers))
        pairs = set()
        for raw, where in items:
            if not (isinstance(raw, tuple) and len(raw) == 2):
                raise ParseError(*where, "a pair (x, y)", repr(raw))
            x, y = _coerce(raw[0], dom, where), _coerce(raw[1], cod, where)
            if x not in xs or y not in ys:
                raise ParseError(*where, f"elements of the carriers of {format_name(name)}",
                                 format_pair((x, y)))
            pairs.add((x, y))
        rels[name] = FinRelation(dom, cod, frozenset(pairs))
    return Instance(carriers, rels)


def format_element(e) -> str:
    if isinstance(e, str):
        if _BARE_ATOM.fullmatch(e):
            return e
        return '"' + e.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(e, Tag):
        return f"in{e.index + 1}({format_element(e.value)})"
    return "(" + ",".join(format_element(x) for x in e) + ")"


def _format_tagged(e, obj) -> str:
    """Element text using ``inl``/``inr`` for binary sums."""
    if isinstance(obj, ObSum) and isinstance(e, Tag):
        inner = _format_tagged(e.value, obj.summands[e.index])
        if len(obj.summands) == 2:
            return f"{'inl' if e.index == 0 else 'inr'}({inner})"
        return f"in{e.index + 1}({inner})"
    if isinstance(obj, ObTensor):
        return "(" + ",".join(_format_tagged(x, f) for x, f in zip(e, obj.factors)) + ")"
    return format_element(e)


def format_pair(p, dom=None, cod=None) -> str:
    if dom is None:
        return f"({format_element(p[0])},{format_element(p[1])})"
    return f"({_format_tagged(p[0], dom)},{_format_tagged(p[1], cod)})"


def sorted_pairs(rel: FinRelation, carriers) -> list:
    ox = {x: i for i, x in enumerate(carrier(rel.dom, carriers))}
    oy = {y: i for i, y in enumerate(carrier(rel.cod, carriers))}
    return sorted(rel.pairs, key=lambda p: (ox[p[0]], oy[p[1]]))


def format_relation(rel: FinRelation, carriers) -> str:
    return "{" + ",".join(format_pair(p, rel.dom, rel.cod)
                          for p in sorted_pairs(rel, carriers)) + "}"


def print_instance(inst: Instance, pres: OlogPresentation) -> str:
    lines = []
    for t in pres.type_generators:
        atoms = ", ".join(format_element(a) for a in inst.carriers.get(t, ()))
        lines.append(f"type {format_name(t)} = {{{atoms}}}")
    for r in pres.relation_generators:
        rel = inst.relations.get(r)
        if rel is None:
            continue
        lines.append(f"rel {format_name(r)} = {format_relation(rel, inst.carriers)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# linear instances

def _rational(ts: TokenStream) -> Fraction:
    neg = ts.accept("-")
    t = ts.tok
    if t.kind != "NAME" or not t.text.isdigit():
        ts.fail("a rational number")
    ts.advance()
    q = Fraction(int(t.text))
    if ts.accept("/"):
        d = ts.tok
        if d.kind != "NAME" or not d.text.isdigit() or int(d.text) == 0:
            ts.fail("a nonzero denominator")
        ts.advance()
        q /= int(d.text)
    return -q if neg else q


def parse_linear_instance(text: str, pres: OlogPresentation) -> LinearInstance:
    """``dim V = 2`` and ``rel L = span{(1, 2, 0), ...}`` statements.

    Vectors list domain coordinates, then codomain coordinates.  Unmentioned
    relations are the zero subspace.
    """
    from .linrel import lin_dim

    ts = TokenStream(text)
    dims = {t: 0 for t in pres.type_generators}
    pending = []
    while not ts.at_end():
        t = ts.tok
        if t.kind != "NAME" or t.text not in ("dim", "rel"):
            ts.fail("'dim' or 'rel'")
        ts.advance()
        name = ts.name()
        ts.expect("=")
        if t.text == "dim":
            if name not in dims:
                raise ParseError(t.line, t.col, "a declared type", repr(name))
            n = ts.tok
            if n.kind != "NAME" or not n.text.isdigit():
                ts.fail("a dimension")
            ts.advance()
            dims[name] = int(n.text)
            continue
        if name not in pres.relation_generators:
            raise ParseError(t.line, t.col, "a declared relation", repr(name))
        ts.expect("span")
        ts.expect("{")
        vecs = []
        if not ts.at("}"):
            while True:
                where = (ts.tok.line, ts.tok.col)
                ts.expect("(")
                v = []
                if not ts.at(")"):
                    v.append(_rational(ts))
                    while ts.accept(","):
                        v.append(_rational(ts))
                ts.expect(")")
                vecs.append((v, where))
                if not ts.accept(","):
                    break
        ts.expect("}")
        pending.append((name, vecs))
    rels = {}
    for name, (dom, cod) in pres.relation_generators.items():
        rels[name] = LinRel(lin_dim(dom, dims), lin_dim(cod, dims), ())
    for name, vecs in pending:
        dom, cod = pres.relation_generators[name]
        a, b = lin_dim(dom, dims), lin_dim(cod, dims)
        for v, where in vecs:
            if len(v) != a + b:
                raise ParseError(*where, f"a vector of length {a + b}", f"length {len(v)}")
        rels[name] = LinRel.span(a, b, [v for v, _ in vecs])
    return LinearInstance(dims, rels)


def _format_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def print_linear_instance(linst: LinearInstance, pres: OlogPresentation) -> str:
    lines = [f"dim {format_name(t)} = {linst.dims.get(t, 0)}" for t in pres.type_generators]
    for r in pres.relation_generators:
        rel = linst.relations.get(r)
        if rel is None:
            continue
        vecs = ", ".join("(" + ", ".join(_format_q(v) for v in row) + ")" for row in rel.basis)
        lines.append(f"rel {format_name(r)} = span{{{vecs}}}")
    return "\n".join(lines) + "\n"
