"""Text formats for the logic front end.

Formulas::

    exists y:B. R(x, y) & S(y, z)      (the body of exists extends right)
    phi | psi,  true,  false,  t = s

Terms: ``x``, ``f(t)``, ``<t, s>``, ``pi1(t)``, ``pi2(t)``, ``*``,
``in1[A + B](t)``, ``in2[A + B](t)``, ``case(t; x:A. r; y:B. s)``.
Contexts: ``[x:A, y:B ; z:C]`` where the optional semicolon splits domain from
codomain.  Sequents: ``[ctx] phi |- psi``.
"""
from __future__ import annotations

import os

from ..core import format_name, normalize_object
from ..lexer import ParseError, TokenStream
from ..text import _object, parse_olog
from .proofs import ProofTree
from .semantics import SignatureMap
from .syntax import (
    And, App, Basic, Case, Context, Eq, Exists, Falsity, FunSymbol, Inj1, Inj2, One,
    Or, PairT, Prod, Proj1, Proj2, Rel, Sequent, StarT, SumT, Theory, Truth, Var, Zero,
)

_TERM_WORDS = {"pi1", "pi2", "in1", "in2", "case"}
_FORMULA_WORDS = {"true", "false", "exists"}


# ---------------------------------------------------------------------------
# parsing

class _P:
    def __init__(self, ts: TokenStream):
        self.ts = ts

    # types
    def type(self):
        out = self.tprod()
        while self.ts.accept("+"):
            out = SumT(out, self.tprod())
        return out

    def tprod(self):
        out = self.tatom()
        while self.ts.accept("*"):
            out = Prod(out, self.tatom())
        return out

    def tatom(self):
        ts = self.ts
        if ts.accept("("):
            t = self.type()
            ts.expect(")")
            return t
        tok = ts.tok
        if tok.kind == "NAME" and tok.text == "1":
            ts.advance()
            return One()
        if tok.kind == "NAME" and tok.text == "0":
            ts.advance()
            return Zero()
        return Basic(ts.name("a type"))

    # terms
    def var(self):
        tok = self.ts.tok
        if tok.kind != "NAME" or tok.text in _TERM_WORDS or tok.text in _FORMULA_WORDS:
            self.ts.fail("a variable")
        self.ts.advance()
        return tok.text

    def term(self):
        ts = self.ts
        if ts.accept("<"):
            left = self.term()
            ts.expect(",")
            right = self.term()
            ts.expect(">")
            return PairT(left, right)
        if ts.accept("*"):
            return StarT()
        tok = ts.tok
        if tok.kind == "NAME" and tok.text in ("pi1", "pi2"):
            ts.advance()
            ts.expect("(")
            t = self.term()
            ts.expect(")")
            return Proj1(t) if tok.text == "pi1" else Proj2(t)
        if tok.kind == "NAME" and tok.text in ("in1", "in2"):
            ts.advance()
            ts.expect("[")
            into = self.type()
            ts.expect("]")
            ts.expect("(")
            t = self.term()
            ts.expect(")")
            return Inj1(t, into) if tok.text == "in1" else Inj2(t, into)
        if tok.kind == "NAME" and tok.text == "case":
            ts.advance()
            ts.expect("(")
            scr = self.term()
            ts.expect(";")
            x = self.var()
            ts.expect(":")
            a = self.type()
            ts.expect(".")
            r = self.term()
            ts.expect(";")
            y = self.var()
            ts.expect(":")
            b = self.type()
            ts.expect(".")
            s = self.term()
            ts.expect(")")
            return Case(scr, x, a, r, y, b, s)
        if tok.kind in ("NAME", "STRING") and ts.peek().kind == "SYM" and ts.peek().text == "(":
            ts.advance()
            ts.advance()
            arg = self.term()
            ts.expect(")")
            return App(tok.text, arg)
        return Var(self.var())

    # formulas
    def formula(self):
        out = self.conj()
        while self.ts.accept("|"):
            out = Or(out, self.conj())
        return out

    def conj(self):
        out = self.unary()
        while self.ts.accept("&"):
            out = And(out, self.unary())
        return out

    def unary(self):
        ts = self.ts
        tok = ts.tok
        if ts.accept("("):
            f = self.formula()
            ts.expect(")")
            return f
        if tok.kind == "NAME" and tok.text == "true":
            ts.advance()
            return Truth()
        if tok.kind == "NAME" and tok.text == "false":
            ts.advance()
            return Falsity()
        if tok.kind == "NAME" and tok.text == "exists":
            ts.advance()
            x = self.var()
            ts.expect(":")
            ty = self.type()
            ts.expect(".")
            return Exists(x, ty, self.formula())
        if tok.kind in ("NAME", "STRING") and tok.text not in _TERM_WORDS \
                and ts.peek().kind == "SYM" and ts.peek().text == "(":
            ts.advance()
            ts.advance()
            args = []
            if not ts.at(")"):
                args.append(self.term())
                while ts.accept(","):
                    args.append(self.term())
            ts.expect(")")
            if ts.accept("="):
                if len(args) != 1:
                    raise ParseError(tok.line, tok.col, "a unary function symbol before '='")
                return Eq(App(tok.text, args[0]), self.term())
            return Rel(tok.text, tuple(args))
        left = self.term()
        ts.expect("=")
        return Eq(left, self.term())

    # contexts and sequents
    def context(self):
        ts = self.ts
        ts.expect("[")
        entries, split = [], None
        seen = set()

        def entry():
            tok = ts.tok
            x = self.var()
            if x in seen:
                raise ParseError(tok.line, tok.col, "distinct context variables", x)
            seen.add(x)
            ts.expect(":")
            entries.append((x, self.type()))

        if not ts.at("]") and not ts.at(";"):
            entry()
            while ts.accept(","):
                entry()
        if ts.accept(";"):
            split = len(entries)
            if not ts.at("]"):
                entry()
                while ts.accept(","):
                    entry()
        ts.expect("]")
        return Context(tuple(entries), split)

    def judgement(self):
        return self.context(), self.formula()

    def sequent(self):
        ctx = self.context()
        lhs = self.formula()
        self.ts.expect("|-")
        return Sequent(ctx, lhs, self.formula())

    def proof(self):
        ts = self.ts
        tok = ts.tok
        rule = ts.name("a rule name")
        witnesses = {}
        if ts.accept("("):
            if rule == "axiom":
                n = ts.tok
                if n.kind != "NAME" or not n.text.isdigit():
                    ts.fail("an axiom index")
                ts.advance()
                witnesses["index"] = int(n.text)
            elif rule == "cut":
                witnesses["chi"] = self.formula()
            elif rule == "exists_intro":
                witnesses["term"] = self.term()
            elif rule == "substitution":
                terms = {}
                if not ts.at(")"):
                    while True:
                        x = self.var()
                        ts.expect(":=")
                        terms[x] = self.term()
                        if not ts.accept(","):
                            break
                witnesses["terms"] = terms
            else:
                raise ParseError(tok.line, tok.col, f"no witnesses for rule {rule}")
            ts.expect(")")
        concl = self.sequent()
        premises = []
        if ts.accept("{"):
            while not ts.at("}"):
                premises.append(self.proof())
            ts.expect("}")
        return ProofTree(rule, concl, tuple(premises), witnesses)


def _parse(text, method):
    ts = TokenStream(text)
    out = getattr(_P(ts), method)()
    ts.expect_end()
    return out


def parse_type(text):
    return _parse(text, "type")


def parse_term(text):
    return _parse(text, "term")


def parse_formula(text):
    return _parse(text, "formula")


def parse_context(text):
    return _parse(text, "context")


def parse_sequent(text):
    return _parse(text, "sequent")


def parse_judgement(text):
    """``[ctx] formula`` as a pair (Context, formula)."""
    return _parse(text, "judgement")


def parse_theory(text: str) -> Theory:
    """``theory NAME regular|coherent`` then ``type``, ``rel``, ``fun``, ``axiom`` lines.

    ``axiom [ctx] phi -|- psi`` stands for the two sequents.
    """
    ts = TokenStream(text)
    p = _P(ts)
    name, mode = "", "regular"
    types, rels, funs, axioms = [], {}, {}, []
    while not ts.at_end():
        tok = ts.tok
        if tok.kind != "NAME":
            ts.fail("a statement keyword")
        kw = tok.text
        ts.advance()
        if kw == "theory":
            if not ts.at_keyword("regular", "coherent"):
                name = ts.name()
            if ts.at_keyword("regular", "coherent"):
                mode = ts.advance().text
        elif kw == "type":
            types.append(ts.name("a type name"))
            while ts.accept(","):
                types.append(ts.name("a type name"))
        elif kw == "rel":
            r = ts.name("a relation symbol")
            ts.expect(":")
            args = []
            if ts.accept("("):
                ts.expect(")")
            else:
                args.append(p.type())
                while ts.accept(","):
                    args.append(p.type())
            rels[r] = tuple(args)
        elif kw == "fun":
            f = ts.name("a function symbol")
            ts.expect(":")
            dom = p.type()
            ts.expect("->")
            funs[f] = FunSymbol(dom, p.type())
        elif kw == "axiom":
            ctx = p.context()
            lhs = p.formula()
            if ts.accept("|-"):
                axioms.append(Sequent(ctx, lhs, p.formula()))
            elif ts.at("-") and ts.peek().text == "|-":
                ts.advance()
                ts.advance()
                rhs = p.formula()
                axioms.append(Sequent(ctx, lhs, rhs))
                axioms.append(Sequent(ctx, rhs, lhs))
            else:
                ts.fail("'|-' or '-|-'")
        else:
            raise ParseError(tok.line, tok.col, "a statement keyword", repr(kw))
    return Theory(tuple(types), rels, funs, tuple(axioms), mode, name)


def parse_proofs(text: str) -> dict:
    """``proof NAME = <proof tree>`` blocks, in file order."""
    ts = TokenStream(text)
    p = _P(ts)
    out = {}
    while not ts.at_end():
        ts.expect("proof")
        tok = ts.tok
        name = ts.name("a proof name")
        if name in out:
            raise ParseError(tok.line, tok.col, "a fresh proof name", repr(name))
        ts.expect("=")
        out[name] = p.proof()
    return out


def parse_proof(text: str) -> ProofTree:
    """A single proof tree, with or without the ``proof NAME =`` header."""
    ts = TokenStream(text)
    if ts.at_keyword("proof") and ts.peek(2).kind == "SYM" and ts.peek(2).text == "=":
        proofs = parse_proofs(text)
        if len(proofs) != 1:
            raise ParseError(1, 1, "exactly one proof")
        return next(iter(proofs.values()))
    return _parse(text, "proof")


def parse_signature_map(text: str, base_dir: str = "."):
    """Map file: ``olog "path"`` then ``type A -> X``, ``rel R -> g``, ``fun f -> g``.

    Returns ``(presentation, SignatureMap)``.
    """
    ts = TokenStream(text)
    pres = None
    types, rels, funs = {}, {}, {}
    while not ts.at_end():
        tok = ts.tok
        kw = ts.name("a statement keyword")
        if kw == "olog":
            path = ts.name("a path")
            full = path if os.path.isabs(path) else os.path.join(base_dir, path)
            with open(full, encoding="utf-8") as fh:
                pres = parse_olog(fh.read())
        elif kw == "type":
            t = ts.name()
            ts.expect("->")
            types[t] = normalize_object(_object(ts))
        elif kw in ("rel", "fun"):
            s = ts.name()
            ts.expect("->")
            (rels if kw == "rel" else funs)[s] = ts.name()
        else:
            raise ParseError(tok.line, tok.col, "'olog', 'type', 'rel' or 'fun'", repr(kw))
    if pres is None:
        raise ParseError(1, 1, "an 'olog' statement")
    return pres, SignatureMap(types, rels, funs)


# ---------------------------------------------------------------------------
# printing

def _name(n):
    return format_name(n)


def format_type(t) -> str:
    if isinstance(t, Basic):
        return _name(t.name)
    if isinstance(t, One):
        return "1"
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Prod):
        l = format_type(t.left)
        r = format_type(t.right)
        if isinstance(t.left, SumT):
            l = f"({l})"
        if isinstance(t.right, (Prod, SumT)):
            r = f"({r})"
        return f"{l} * {r}"
    if isinstance(t, SumT):
        r = format_type(t.right)
        if isinstance(t.right, SumT):
            r = f"({r})"
        return f"{format_type(t.left)} + {r}"
    raise TypeError(t)


def format_term(t) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, App):
        return f"{_name(t.fn)}({format_term(t.arg)})"
    if isinstance(t, PairT):
        return f"<{format_term(t.left)}, {format_term(t.right)}>"
    if isinstance(t, Proj1):
        return f"pi1({format_term(t.term)})"
    if isinstance(t, Proj2):
        return f"pi2({format_term(t.term)})"
    if isinstance(t, StarT):
        return "*"
    if isinstance(t, (Inj1, Inj2)):
        word = "in1" if isinstance(t, Inj1) else "in2"
        return f"{word}[{format_type(t.into)}]({format_term(t.term)})"
    if isinstance(t, Case):
        return (f"case({format_term(t.scrutinee)}; {t.var1}:{format_type(t.type1)}. "
                f"{format_term(t.branch1)}; {t.var2}:{format_type(t.type2)}. "
                f"{format_term(t.branch2)})")
    raise TypeError(t)


def format_formula(f) -> str:
    if isinstance(f, Rel):
        return f"{_name(f.symbol)}(" + ", ".join(format_term(a) for a in f.args) + ")"
    if isinstance(f, Eq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, Truth):
        return "true"
    if isinstance(f, Falsity):
        return "false"
    if isinstance(f, Exists):
        return f"exists {f.var}:{format_type(f.type)}. {format_formula(f.body)}"
    if isinstance(f, And):
        l, r = format_formula(f.left), format_formula(f.right)
        if isinstance(f.left, (Or, Exists)):
            l = f"({l})"
        if isinstance(f.right, (And, Or, Exists)):
            r = f"({r})"
        return f"{l} & {r}"
    if isinstance(f, Or):
        l, r = format_formula(f.left), format_formula(f.right)
        if isinstance(f.left, Exists):
            l = f"({l})"
        if isinstance(f.right, (Or, Exists)):
            r = f"({r})"
        return f"{l} | {r}"
    raise TypeError(f)


def format_context(ctx: Context) -> str:
    def side(entries):
        return ", ".join(f"{n}:{format_type(t)}" for n, t in entries)
    if ctx.split is None:
        return f"[{side(ctx.entries)}]"
    left, right = side(ctx.entries[:ctx.split]), side(ctx.entries[ctx.split:])
    return f"[{left}{' ' if left else ''};{' ' if right else ''}{right}]"


def format_sequent(s: Sequent) -> str:
    return f"{format_context(s.context)} {format_formula(s.lhs)} |- {format_formula(s.rhs)}"


def format_proof(p: ProofTree, indent: int = 0) -> str:
    pad = "  " * indent
    head = p.rule
    w = p.witnesses
    if p.rule == "axiom" and "index" in w:
        head += f"({w['index']})"
    elif p.rule == "cut" and w.get("chi") is not None:
        head += f"({format_formula(w['chi'])})"
    elif p.rule == "exists_intro" and "term" in w:
        head += f"({format_term(w['term'])})"
    elif p.rule == "substitution" and "terms" in w:
        head += "(" + ", ".join(f"{x} := {format_term(t)}" for x, t in w["terms"].items()) + ")"
    line = f"{pad}{head} {format_sequent(p.conclusion)}"
    if not p.premises:
        return line
    inner = "\n".join(format_proof(q, indent + 1) for q in p.premises)
    return f"{line} {{\n{inner}\n{pad}}}"


def print_proofs(proofs: dict) -> str:
    return "\n\n".join(f"proof {_name(n)} =\n{format_proof(p, 1)}" for n, p in proofs.items()) + "\n"


def print_theory(thy: Theory) -> str:
    lines = []
    head = "theory"
    if thy.name:
        head += f" {_name(thy.name)}"
    lines.append(f"{head} {thy.mode}")
    for t in thy.types:
        lines.append(f"type {_name(t)}")
    for r, args in thy.relations.items():
        body = ", ".join(format_type(a) for a in args) if args else "()"
        lines.append(f"rel {_name(r)} : {body}")
    for f, sym in thy.functions.items():
        lines.append(f"fun {_name(f)} : {format_type(sym.dom)} -> {format_type(sym.cod)}")
    for ax in thy.axioms:
        lines.append(f"axiom {format_sequent(ax)}")
    return "\n".join(lines) + "\n"
