"""Types, terms, formulas, contexts, sequents and theories."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class Basic:
    name: str


@dataclass(frozen=True)
class Prod:
    left: object
    right: object


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class SumT:
    left: object
    right: object


@dataclass(frozen=True)
class Zero:
    pass


LogicType = Union[Basic, Prod, One, SumT, Zero]


def type_uses_sums(t) -> bool:
    if isinstance(t, (SumT, Zero)):
        return True
    if isinstance(t, Prod):
        return type_uses_sums(t.left) or type_uses_sums(t.right)
    return False


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    fn: str
    arg: object


@dataclass(frozen=True)
class PairT:
    left: object
    right: object


@dataclass(frozen=True)
class Proj1:
    term: object


@dataclass(frozen=True)
class Proj2:
    term: object


@dataclass(frozen=True)
class StarT:
    pass


@dataclass(frozen=True)
class Inj1:
    term: object
    into: object


@dataclass(frozen=True)
class Inj2:
    term: object
    into: object


@dataclass(frozen=True)
class Case:
    scrutinee: object
    var1: str
    type1: object
    branch1: object
    var2: str
    type2: object
    branch2: object


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Rel:
    symbol: str
    args: tuple


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Truth:
    pass


@dataclass(frozen=True)
class Falsity:
    pass


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    type: object
    body: object


TOP = Truth()
BOT = Falsity()


def conj(formulas) -> object:
    """Left-nested conjunction; the empty conjunction is truth."""
    formulas = list(formulas)
    if not formulas:
        return TOP
    out = formulas[0]
    for f in formulas[1:]:
        out = And(out, f)
    return out


def disj(formulas) -> object:
    formulas = list(formulas)
    if not formulas:
        return BOT
    out = formulas[0]
    for f in formulas[1:]:
        out = Or(out, f)
    return out


def exists_many(binders, body):
    for name, ty in reversed(list(binders)):
        body = Exists(name, ty, body)
    return body


def conjuncts(f) -> list:
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


# ---------------------------------------------------------------------------
# contexts and sequents


@dataclass(frozen=True)
class Context:
    entries: tuple                # ((name, type), ...)
    split: int | None = None      # entries[:split] form the domain side

    def __post_init__(self):
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError(f"repeated variable in context: {names}")

    @staticmethod
    def of(*entries, split=None):
        return Context(tuple(entries), split)

    @property
    def names(self):
        return [n for n, _ in self.entries]

    @property
    def types(self):
        return [t for _, t in self.entries]

    def lookup(self, name):
        for n, t in self.entries:
            if n == name:
                return t
        return None

    def __contains__(self, name):
        return any(n == name for n, _ in self.entries)

    def __len__(self):
        return len(self.entries)

    def extend(self, name, ty) -> "Context":
        """Context with ``name: ty`` appended (dropping an earlier binding of ``name``)."""
        kept = tuple((n, t) for n, t in self.entries if n != name)
        return Context(kept + ((name, ty),), None)

    @property
    def dom_part(self):
        k = len(self.entries) if self.split is None else self.split
        return self.entries[:k]

    @property
    def cod_part(self):
        k = len(self.entries) if self.split is None else self.split
        return self.entries[k:]

    def unsplit(self) -> "Context":
        return Context(self.entries, None)


@dataclass(frozen=True)
class Sequent:
    context: Context
    lhs: object
    rhs: object


@dataclass(frozen=True)
class FunSymbol:
    dom: object
    cod: object


@dataclass(frozen=True)
class Theory:
    types: tuple
    relations: dict                 # symbol -> tuple of argument types
    functions: dict = field(default_factory=dict)   # symbol -> FunSymbol
    axioms: tuple = ()
    mode: str = "regular"
    name: str = ""

    @property
    def coherent(self):
        return self.mode == "coherent"


# ---------------------------------------------------------------------------
# free variables and substitution


def term_vars(t) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return term_vars(t.arg)
    if isinstance(t, PairT):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, (Proj1, Proj2, Inj1, Inj2)):
        return term_vars(t.term)
    if isinstance(t, StarT):
        return set()
    if isinstance(t, Case):
        return (term_vars(t.scrutinee) | (term_vars(t.branch1) - {t.var1})
                | (term_vars(t.branch2) - {t.var2}))
    raise TypeError(t)


def free_vars(f) -> set:
    if isinstance(f, Rel):
        out = set()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, (Truth, Falsity)):
        return set()
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Exists):
        return free_vars(f.body) - {f.var}
    raise TypeError(f)


def fresh_name(base: str, avoid) -> str:
    base = base.rstrip("'") or "v"
    k = 1
    while True:
        cand = base + "'" * k
        if cand not in avoid:
            return cand
        k += 1


def _range_vars(mapping) -> set:
    out = set()
    for t in mapping.values():
        out |= term_vars(t)
    return out


def subst_term(t, mapping: dict):
    """Simultaneous capture-avoiding substitution of terms for variables."""
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(t.fn, subst_term(t.arg, mapping))
    if isinstance(t, PairT):
        return PairT(subst_term(t.left, mapping), subst_term(t.right, mapping))
    if isinstance(t, (Proj1, Proj2)):
        return type(t)(subst_term(t.term, mapping))
    if isinstance(t, (Inj1, Inj2)):
        return type(t)(subst_term(t.term, mapping), t.into)
    if isinstance(t, StarT):
        return t
    if isinstance(t, Case):
        scr = subst_term(t.scrutinee, mapping)
        v1, b1 = _under_binder(t.var1, t.branch1, mapping, subst_term, term_vars)
        v2, b2 = _under_binder(t.var2, t.branch2, mapping, subst_term, term_vars)
        return Case(scr, v1, t.type1, b1, v2, t.type2, b2)
    raise TypeError(t)


def _under_binder(var, body, mapping, subst, fv):
    inner = {k: v for k, v in mapping.items() if k != var}
    if not inner:
        return var, body
    if var in _range_vars(inner):
        new = fresh_name(var, _range_vars(inner) | fv(body) | set(inner))
        body = subst(body, {var: Var(new)})
        var = new
    return var, subst(body, inner)


def subst_formula(f, mapping: dict):
    if not mapping:
        return f
    if isinstance(f, Rel):
        return Rel(f.symbol, tuple(subst_term(a, mapping) for a in f.args))
    if isinstance(f, Eq):
        return Eq(subst_term(f.left, mapping), subst_term(f.right, mapping))
    if isinstance(f, (Truth, Falsity)):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(subst_formula(f.left, mapping), subst_formula(f.right, mapping))
    if isinstance(f, Exists):
        var, body = _under_binder(f.var, f.body, mapping, subst_formula, free_vars)
        return Exists(var, f.type, body)
    raise TypeError(f)


def rename_vars(f, names: dict):
    return subst_formula(f, {k: Var(v) for k, v in names.items()})


# ---------------------------------------------------------------------------
# alpha-canonical forms


def _canon_term(t, env, counter):
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, App):
        return App(t.fn, _canon_term(t.arg, env, counter))
    if isinstance(t, PairT):
        return PairT(_canon_term(t.left, env, counter), _canon_term(t.right, env, counter))
    if isinstance(t, (Proj1, Proj2)):
        return type(t)(_canon_term(t.term, env, counter))
    if isinstance(t, (Inj1, Inj2)):
        return type(t)(_canon_term(t.term, env, counter), t.into)
    if isinstance(t, StarT):
        return t
    if isinstance(t, Case):
        scr = _canon_term(t.scrutinee, env, counter)
        n1 = f"v{counter[0]}"
        counter[0] += 1
        b1 = _canon_term(t.branch1, {**env, t.var1: n1}, counter)
        n2 = f"v{counter[0]}"
        counter[0] += 1
        b2 = _canon_term(t.branch2, {**env, t.var2: n2}, counter)
        return Case(scr, n1, t.type1, b1, n2, t.type2, b2)
    raise TypeError(t)


def _canon_formula(f, env, counter):
    if isinstance(f, Rel):
        return Rel(f.symbol, tuple(_canon_term(a, env, counter) for a in f.args))
    if isinstance(f, Eq):
        return Eq(_canon_term(f.left, env, counter), _canon_term(f.right, env, counter))
    if isinstance(f, (Truth, Falsity)):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(_canon_formula(f.left, env, counter), _canon_formula(f.right, env, counter))
    if isinstance(f, Exists):
        name = f"v{counter[0]}"
        counter[0] += 1
        return Exists(name, f.type, _canon_formula(f.body, {**env, f.var: name}, counter))
    raise TypeError(f)


def alpha_canonicalize(ctx: Context, *formulas):
    """Rename context and bound variables to ``v0, v1, ...``.

    Context variables are numbered first, in order; binders follow in
    left-to-right pre-order.  Returns ``(ctx, formula, ...)``.
    """
    env = {n: f"v{i}" for i, n in enumerate(ctx.names)}
    counter = [len(ctx.entries)]
    new_ctx = Context(tuple((env[n], t) for n, t in ctx.entries), ctx.split)
    outs = tuple(_canon_formula(f, env, counter) for f in formulas)
    return (new_ctx,) + outs


def alpha_equivalent_sequents(a: Sequent, b: Sequent) -> bool:
    ca = alpha_canonicalize(a.context.unsplit(), a.lhs, a.rhs)
    cb = alpha_canonicalize(b.context.unsplit(), b.lhs, b.rhs)
    return ca == cb
