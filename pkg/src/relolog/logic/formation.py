"""Formation rules: typing of terms and well-formedness of formulas."""
from __future__ import annotations

from ..core import OlogError
from .syntax import (
    And, App, Basic, Case, Context, Eq, Exists, Falsity, Inj1, Inj2, One, Or, PairT,
    Prod, Proj1, Proj2, Rel, Sequent, StarT, SumT, Theory, Truth, Var, Zero,
    type_uses_sums,
)


class FormationError(OlogError):
    pass


class UnboundVariable(FormationError):
    pass


class TypeMismatch(FormationError):
    pass


class ModeViolation(FormationError):
    pass


class UnknownSymbol(FormationError):
    pass


WELL_FORMED = "well-formed"


def check_type(ty, thy: Theory):
    if isinstance(ty, Basic):
        if ty.name not in thy.types:
            raise UnknownSymbol(f"unknown type {ty.name!r}")
    elif isinstance(ty, (Prod, SumT)):
        if isinstance(ty, SumT) and not thy.coherent:
            raise ModeViolation("sum types need a coherent theory")
        check_type(ty.left, thy)
        check_type(ty.right, thy)
    elif isinstance(ty, Zero):
        if not thy.coherent:
            raise ModeViolation("the empty type needs a coherent theory")
    elif not isinstance(ty, One):
        raise TypeMismatch(f"not a type: {ty!r}")


def check_context(ctx: Context, thy: Theory):
    for _, ty in ctx.entries:
        check_type(ty, thy)


def type_of(ctx: Context, t, thy: Theory):
    """Type of a term in context."""
    if isinstance(t, Var):
        ty = ctx.lookup(t.name)
        if ty is None:
            raise UnboundVariable(f"variable {t.name!r} not in context")
        return ty
    if not thy.coherent:
        raise ModeViolation(f"only variables are terms in regular logic, got {type(t).__name__}")
    if isinstance(t, App):
        sym = thy.functions.get(t.fn)
        if sym is None:
            raise UnknownSymbol(f"unknown function symbol {t.fn!r}")
        arg = type_of(ctx, t.arg, thy)
        if arg != sym.dom:
            raise TypeMismatch(f"{t.fn} expects {sym.dom!r}, got {arg!r}")
        return sym.cod
    if isinstance(t, PairT):
        return Prod(type_of(ctx, t.left, thy), type_of(ctx, t.right, thy))
    if isinstance(t, (Proj1, Proj2)):
        ty = type_of(ctx, t.term, thy)
        if not isinstance(ty, Prod):
            raise TypeMismatch(f"projection of a term of non-product type {ty!r}")
        return ty.left if isinstance(t, Proj1) else ty.right
    if isinstance(t, StarT):
        return One()
    if isinstance(t, (Inj1, Inj2)):
        into = t.into
        if not isinstance(into, SumT):
            raise TypeMismatch(f"inclusion into non-sum type {into!r}")
        check_type(into, thy)
        ty = type_of(ctx, t.term, thy)
        want = into.left if isinstance(t, Inj1) else into.right
        if ty != want:
            raise TypeMismatch(f"inclusion expects {want!r}, got {ty!r}")
        return into
    if isinstance(t, Case):
        ty = type_of(ctx, t.scrutinee, thy)
        if ty != SumT(t.type1, t.type2):
            raise TypeMismatch(f"case on {ty!r} with branches for {t.type1!r} and {t.type2!r}")
        r = type_of(ctx.extend(t.var1, t.type1), t.branch1, thy)
        s = type_of(ctx.extend(t.var2, t.type2), t.branch2, thy)
        if r != s:
            raise TypeMismatch(f"case branches have types {r!r} and {s!r}")
        return r
    raise TypeMismatch(f"not a term: {t!r}")


def check_formula(ctx: Context, f, thy: Theory):
    if isinstance(f, Rel):
        arity = thy.relations.get(f.symbol)
        if arity is None:
            raise UnknownSymbol(f"unknown relation symbol {f.symbol!r}")
        if len(arity) != len(f.args):
            raise TypeMismatch(f"{f.symbol} takes {len(arity)} arguments, got {len(f.args)}")
        for a, want in zip(f.args, arity):
            got = type_of(ctx, a, thy)
            if got != want:
                raise TypeMismatch(f"{f.symbol}: argument of type {got!r}, expected {want!r}")
    elif isinstance(f, Eq):
        a, b = type_of(ctx, f.left, thy), type_of(ctx, f.right, thy)
        if a != b:
            raise TypeMismatch(f"equation between types {a!r} and {b!r}")
    elif isinstance(f, Truth):
        pass
    elif isinstance(f, Falsity):
        if not thy.coherent:
            raise ModeViolation("falsity needs a coherent theory")
    elif isinstance(f, And):
        check_formula(ctx, f.left, thy)
        check_formula(ctx, f.right, thy)
    elif isinstance(f, Or):
        if not thy.coherent:
            raise ModeViolation("disjunction needs a coherent theory")
        check_formula(ctx, f.left, thy)
        check_formula(ctx, f.right, thy)
    elif isinstance(f, Exists):
        check_type(f.type, thy)
        check_formula(ctx.extend(f.var, f.type), f.body, thy)
    else:
        raise TypeMismatch(f"not a formula: {f!r}")
    return WELL_FORMED


def check_formation(ctx: Context, x, thy: Theory):
    """Type of a term, or ``"well-formed"`` for a formula."""
    check_context(ctx, thy)
    if isinstance(x, (Rel, Eq, Truth, Falsity, And, Or, Exists)):
        return check_formula(ctx, x, thy)
    return type_of(ctx, x, thy)


def check_sequent(seq: Sequent, thy: Theory):
    check_context(seq.context, thy)
    check_formula(seq.context, seq.lhs, thy)
    check_formula(seq.context, seq.rhs, thy)


def check_theory(thy: Theory):
    if not thy.coherent and thy.functions:
        raise ModeViolation("function symbols need a coherent theory")
    for t in thy.types:
        if not isinstance(t, str):
            raise TypeMismatch(f"type names are strings: {t!r}")
    for sym, arity in thy.relations.items():
        for ty in arity:
            check_type(ty, thy)
    for sym, fs in thy.functions.items():
        check_type(fs.dom, thy)
        check_type(fs.cod, thy)
    for ax in thy.axioms:
        check_sequent(ax, thy)


__all__ = [
    "FormationError", "UnboundVariable", "TypeMismatch", "ModeViolation", "UnknownSymbol",
    "check_formation", "check_formula", "check_sequent", "check_theory", "type_of",
    "check_type", "WELL_FORMED", "type_uses_sums",
]
