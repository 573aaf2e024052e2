"""Checking explicit sequent proofs.

A proof is a tree of :class:`ProofTree` nodes.  Each node names an inference
rule, states its conclusion, lists its premises and carries whatever
witnesses the rule needs (the substituted terms, the existential witness, the
axiom index).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core import OlogError
from .formation import FormationError, check_sequent, type_of
from .syntax import (
    And, Case, Context, Eq, Exists, Falsity, Inj1, Inj2, One, Or, PairT, Proj1,
    Proj2, Sequent, StarT, SumT, Theory, Truth, Var, Zero, alpha_canonicalize,
    alpha_equivalent_sequents, conjuncts, subst_formula, subst_term,
)

REGULAR_RULES = (
    "identity", "cut", "substitution", "eq_refl", "eq_subst", "truth",
    "conj_intro", "conj_elim_left", "conj_elim_right", "exists_down", "exists_up",
    "frobenius", "exists_intro", "exists_elim", "axiom",
)
COHERENT_RULES = (
    "eq_term", "proj1", "proj2", "pair", "incl1", "incl2", "case_cover",
    "case_disjoint", "singleton", "empty", "falsity", "disj_elim",
    "disj_intro_left", "disj_intro_right", "distributivity",
)
ALL_RULES = REGULAR_RULES + COHERENT_RULES


class RuleMismatch(OlogError):
    def __init__(self, rule, reason):
        super().__init__(f"{rule}: {reason}")
        self.rule = rule
        self.reason = reason


class UnknownAxiomIndex(RuleMismatch):
    pass


class AlphaMismatch(RuleMismatch):
    pass


@dataclass(frozen=True)
class ProofTree:
    rule: str
    conclusion: Sequent
    premises: tuple = ()
    witnesses: dict = field(default_factory=dict, hash=False, compare=True)

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()


@dataclass(frozen=True)
class Diagnostic:
    path: tuple
    rule: str
    reason: str

    def __str__(self):
        where = "root" if not self.path else "premise " + ".".join(str(i + 1) for i in self.path)
        return f"{where}: rule {self.rule}: {self.reason}"


@dataclass
class ProofCheck:
    ok: bool
    diagnostics: list

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else "\n".join(str(d) for d in self.diagnostics)


def _same_ctx(a: Context, b: Context) -> bool:
    return a.entries == b.entries


def _aeq(ctx: Context, f, g) -> bool:
    """Alpha-equivalence of two formulas over the same free context."""
    c = ctx.unsplit()
    return alpha_canonicalize(c, f) == alpha_canonicalize(c, g)


def _teq(ctx: Context, s, t) -> bool:
    return _aeq(ctx, Eq(s, s), Eq(t, t))


class _Checker:
    def __init__(self, thy: Theory, disabled=()):
        self.thy = thy
        self.disabled = set(disabled)
        self.diags = []

    def run(self, node: ProofTree, path=()):
        for i, p in enumerate(node.premises):
            self.run(p, path + (i,))
        try:
            self.node(node)
        except RuleMismatch as exc:
            self.diags.append(Diagnostic(path, node.rule, exc.reason))

    def fail(self, rule, reason, cls=RuleMismatch):
        raise cls(rule, reason)

    def need(self, cond, rule, reason):
        if not cond:
            raise RuleMismatch(rule, reason)

    def node(self, node: ProofTree):
        rule = node.rule
        if rule not in ALL_RULES:
            self.fail(rule, "unknown rule name")
        if rule in self.disabled:
            self.fail(rule, "rule is disabled")
        if rule in COHERENT_RULES and not self.thy.coherent:
            self.fail(rule, "rule is only available in coherent logic")
        try:
            check_sequent(node.conclusion, self.thy)
        except FormationError as exc:
            self.fail(rule, f"conclusion is not well-formed: {exc}")
        want = _ARITY.get(rule)
        if want is not None and len(node.premises) != want:
            self.fail(rule, f"expected {want} premise(s), got {len(node.premises)}")
        getattr(self, "rule_" + rule)(node, node.conclusion, [p.conclusion for p in node.premises])

    # -- structural ------------------------------------------------------

    def rule_identity(self, node, c, ps):
        self.need(_aeq(c.context, c.lhs, c.rhs), "identity", "left and right formulas differ")

    def rule_cut(self, node, c, ps):
        p1, p2 = ps
        self.need(_same_ctx(p1.context, c.context) and _same_ctx(p2.context, c.context),
                  "cut", "premise contexts differ from the conclusion context")
        self.need(_aeq(c.context, p1.lhs, c.lhs), "cut", "first premise must start from the conclusion's left formula")
        self.need(_aeq(c.context, p2.rhs, c.rhs), "cut", "second premise must end at the conclusion's right formula")
        self.need(_aeq(c.context, p1.rhs, p2.lhs), "cut", "premises do not meet at a common formula")
        chi = node.witnesses.get("chi")
        if chi is not None:
            self.need(_aeq(c.context, chi, p1.rhs), "cut", "cut formula differs from the witness")

    def rule_substitution(self, node, c, ps):
        p, = ps
        terms = node.witnesses.get("terms")
        self.need(terms is not None, "substitution", "missing witness terms")
        names = p.context.names
        self.need(set(terms) == set(names), "substitution",
                  "witness terms must cover exactly the premise context")
        for x, ty in p.context.entries:
            try:
                got = type_of(c.context, terms[x], self.thy)
            except FormationError as exc:
                self.fail("substitution", f"term for {x}: {exc}")
            self.need(got == ty, "substitution", f"term for {x} has the wrong type")
        self.need(_aeq(c.context, subst_formula(p.lhs, terms), c.lhs), "substitution",
                  "left formula is not the substituted premise")
        self.need(_aeq(c.context, subst_formula(p.rhs, terms), c.rhs), "substitution",
                  "right formula is not the substituted premise")

    def rule_axiom(self, node, c, ps):
        i = node.witnesses.get("index")
        if not isinstance(i, int) or not 0 <= i < len(self.thy.axioms):
            self.fail("axiom", f"no axiom with index {i}", UnknownAxiomIndex)
        if not alpha_equivalent_sequents(c, self.thy.axioms[i]):
            self.fail("axiom", f"conclusion is not axiom {i} up to renaming", AlphaMismatch)

    # -- equality --------------------------------------------------------

    def rule_eq_refl(self, node, c, ps):
        r = c.rhs
        self.need(isinstance(r, Eq) and _teq(c.context, r.left, r.right), "eq_refl",
                  "right formula must be t = t")
        if not self.thy.coherent:
            self.need(isinstance(r.left, Var), "eq_refl", "right formula must be x = x")

    def _eq_pairs(self, rule, f):
        pairs = []
        for e in conjuncts(f):
            self.need(isinstance(e, Eq) and isinstance(e.left, Var) and isinstance(e.right, Var),
                      rule, "hypothesis must be a conjunction of variable equations")
            pairs.append((e.left.name, e.right))
        xs = [x for x, _ in pairs]
        self.need(len(set(xs)) == len(xs), rule, "substituted variables must be distinct")
        return dict(pairs)

    def rule_eq_subst(self, node, c, ps):
        self.need(isinstance(c.lhs, And), "eq_subst", "left formula must be (x = y) & phi")
        mapping = self._eq_pairs("eq_subst", c.lhs.left)
        self.need(_aeq(c.context, subst_formula(c.lhs.right, mapping), c.rhs), "eq_subst",
                  "right formula is not phi with the equated variables replaced")

    def rule_eq_term(self, node, c, ps):
        mapping = self._eq_pairs("eq_term", c.lhs)
        r = c.rhs
        self.need(isinstance(r, Eq), "eq_term", "right formula must be t = t[y/x]")
        self.need(_teq(c.context, subst_term(r.left, mapping), r.right), "eq_term",
                  "right-hand term is not the substituted left-hand term")

    # -- connectives -----------------------------------------------------

    def rule_truth(self, node, c, ps):
        self.need(isinstance(c.rhs, Truth), "truth", "right formula must be true")

    def rule_falsity(self, node, c, ps):
        self.need(isinstance(c.lhs, Falsity), "falsity", "left formula must be false")

    def rule_conj_intro(self, node, c, ps):
        p1, p2 = ps
        self.need(_same_ctx(p1.context, c.context) and _same_ctx(p2.context, c.context),
                  "conj_intro", "premise contexts differ from the conclusion context")
        self.need(isinstance(c.rhs, And), "conj_intro", "right formula must be a conjunction")
        self.need(_aeq(c.context, p1.lhs, c.lhs) and _aeq(c.context, p2.lhs, c.lhs),
                  "conj_intro", "premises must share the conclusion's left formula")
        self.need(_aeq(c.context, p1.rhs, c.rhs.left) and _aeq(c.context, p2.rhs, c.rhs.right),
                  "conj_intro", "premises must prove the two conjuncts")

    def rule_conj_elim_left(self, node, c, ps):
        self.need(isinstance(c.lhs, And) and _aeq(c.context, c.lhs.left, c.rhs),
                  "conj_elim_left", "expected phi & psi |- phi")

    def rule_conj_elim_right(self, node, c, ps):
        self.need(isinstance(c.lhs, And) and _aeq(c.context, c.lhs.right, c.rhs),
                  "conj_elim_right", "expected phi & psi |- psi")

    def rule_disj_elim(self, node, c, ps):
        p1, p2 = ps
        self.need(_same_ctx(p1.context, c.context) and _same_ctx(p2.context, c.context),
                  "disj_elim", "premise contexts differ from the conclusion context")
        self.need(isinstance(c.lhs, Or), "disj_elim", "left formula must be a disjunction")
        self.need(_aeq(c.context, p1.lhs, c.lhs.left) and _aeq(c.context, p2.lhs, c.lhs.right),
                  "disj_elim", "premises must start from the two disjuncts")
        self.need(_aeq(c.context, p1.rhs, c.rhs) and _aeq(c.context, p2.rhs, c.rhs),
                  "disj_elim", "premises must prove the conclusion's right formula")

    def rule_disj_intro_left(self, node, c, ps):
        self.need(isinstance(c.rhs, Or) and _aeq(c.context, c.rhs.left, c.lhs),
                  "disj_intro_left", "expected phi |- phi | psi")

    def rule_disj_intro_right(self, node, c, ps):
        self.need(isinstance(c.rhs, Or) and _aeq(c.context, c.rhs.right, c.lhs),
                  "disj_intro_right", "expected psi |- phi | psi")

    def rule_distributivity(self, node, c, ps):
        l = c.lhs
        self.need(isinstance(l, And) and isinstance(l.right, Or), "distributivity",
                  "left formula must be phi & (psi | chi)")
        want = Or(And(l.left, l.right.left), And(l.left, l.right.right))
        self.need(_aeq(c.context, want, c.rhs), "distributivity",
                  "right formula must be (phi & psi) | (phi & chi)")

    # -- quantifiers -----------------------------------------------------

    def _extension(self, rule, inner: Context, outer: Context):
        """``inner`` must be ``outer`` plus one fresh trailing variable."""
        self.need(len(inner.entries) == len(outer.entries) + 1
                  and inner.entries[:-1] == outer.entries, rule,
                  "premise context must extend the conclusion context by one variable")
        z, ty = inner.entries[-1]
        return z, ty

    def rule_exists_down(self, node, c, ps):
        p, = ps
        self.need(isinstance(c.lhs, Exists), "exists_down", "left formula must be existential")
        z, ty = self._extension("exists_down", p.context, c.context)
        self.need(ty == c.lhs.type, "exists_down", "bound variable type differs")
        self.need(_aeq(p.context, subst_formula(c.lhs.body, {c.lhs.var: Var(z)}), p.lhs),
                  "exists_down", "premise left formula is not the quantified body")
        self.need(_aeq(p.context, p.rhs, c.rhs), "exists_down", "right formulas differ")

    def rule_exists_up(self, node, c, ps):
        p, = ps
        self.need(isinstance(p.lhs, Exists), "exists_up", "premise left formula must be existential")
        z, ty = self._extension("exists_up", c.context, p.context)
        self.need(ty == p.lhs.type, "exists_up", "bound variable type differs")
        self.need(_aeq(c.context, subst_formula(p.lhs.body, {p.lhs.var: Var(z)}), c.lhs),
                  "exists_up", "left formula is not the quantified body")
        self.need(_aeq(c.context, p.rhs, c.rhs), "exists_up", "right formulas differ")

    def rule_frobenius(self, node, c, ps):
        l = c.lhs
        self.need(isinstance(l, And) and isinstance(l.right, Exists), "frobenius",
                  "left formula must be phi & (exists x:A. psi)")
        ex = l.right
        self.need(ex.var not in c.context, "frobenius",
                  f"side condition [x ∉ Γ] fails: {ex.var} is in the context")
        want = Exists(ex.var, ex.type, And(l.left, ex.body))
        self.need(_aeq(c.context, want, c.rhs), "frobenius",
                  "right formula must be exists x:A. (phi & psi)")

    def rule_exists_intro(self, node, c, ps):
        p, = ps
        self.need(_same_ctx(p.context, c.context), "exists_intro", "premise context differs")
        self.need(isinstance(c.rhs, Exists), "exists_intro", "right formula must be existential")
        t = node.witnesses.get("term")
        self.need(t is not None, "exists_intro", "missing witness term")
        try:
            ty = type_of(c.context, t, self.thy)
        except FormationError as exc:
            self.fail("exists_intro", f"witness term: {exc}")
        self.need(ty == c.rhs.type, "exists_intro", "witness term has the wrong type")
        self.need(_aeq(c.context, p.lhs, c.lhs), "exists_intro", "left formulas differ")
        self.need(_aeq(c.context, subst_formula(c.rhs.body, {c.rhs.var: t}), p.rhs),
                  "exists_intro", "premise does not prove the body at the witness")

    def rule_exists_elim(self, node, c, ps):
        p1, p2 = ps
        self.need(_same_ctx(p1.context, c.context), "exists_elim", "first premise context differs")
        self.need(isinstance(p1.rhs, Exists), "exists_elim", "first premise must prove an existential")
        self.need(_aeq(c.context, p1.lhs, c.lhs), "exists_elim", "left formulas differ")
        ex = p1.rhs
        z, ty = self._extension("exists_elim", p2.context, c.context)
        self.need(ty == ex.type, "exists_elim", "bound variable type differs")
        self.need(_aeq(p2.context, subst_formula(ex.body, {ex.var: Var(z)}), p2.lhs),
                  "exists_elim", "second premise must start from the existential body")
        self.need(_aeq(p2.context, p2.rhs, c.rhs), "exists_elim", "right formulas differ")

    # -- product and sum types ------------------------------------------

    def _entailed_from_truth(self, rule, c):
        self.need(isinstance(c.lhs, Truth), rule, "left formula must be true")
        self.need(isinstance(c.rhs, Eq), rule, "right formula must be an equation")
        return c.rhs

    def rule_proj1(self, node, c, ps):
        r = self._entailed_from_truth("proj1", c)
        self.need(isinstance(r.left, Proj1) and isinstance(r.left.term, PairT)
                  and _teq(c.context, r.left.term.left, r.right), "proj1",
                  "expected pi1(<t,s>) = t")

    def rule_proj2(self, node, c, ps):
        r = self._entailed_from_truth("proj2", c)
        self.need(isinstance(r.left, Proj2) and isinstance(r.left.term, PairT)
                  and _teq(c.context, r.left.term.right, r.right), "proj2",
                  "expected pi2(<t,s>) = s")

    def rule_pair(self, node, c, ps):
        r = self._entailed_from_truth("pair", c)
        ok = (isinstance(r.left, PairT) and isinstance(r.left.left, Proj1)
              and isinstance(r.left.right, Proj2)
              and _teq(c.context, r.left.left.term, r.right)
              and _teq(c.context, r.left.right.term, r.right))
        self.need(ok, "pair", "expected <pi1(t), pi2(t)> = t")

    def _incl(self, rule, c, inj, pick):
        r = self._entailed_from_truth(rule, c)
        cs = r.left
        self.need(isinstance(cs, Case) and isinstance(cs.scrutinee, inj), rule,
                  f"expected case({'in1' if inj is Inj1 else 'in2'}(t); ...) = ...")
        var, branch = pick(cs)
        want = subst_term(branch, {var: cs.scrutinee.term})
        self.need(_teq(c.context, want, r.right), rule, "right side is not the selected branch at t")

    def rule_incl1(self, node, c, ps):
        self._incl("incl1", c, Inj1, lambda cs: (cs.var1, cs.branch1))

    def rule_incl2(self, node, c, ps):
        self._incl("incl2", c, Inj2, lambda cs: (cs.var2, cs.branch2))

    def _case_half(self, rule, c, f, inj):
        self.need(isinstance(f, Exists) and isinstance(f.body, Eq), rule,
                  "expected exists x:A. in_i(x) = t")
        self.need(f.var not in c.context, rule, f"side condition [x ∉ Γ] fails: {f.var} is in the context")
        e = f.body
        self.need(isinstance(e.left, inj) and e.left.term == Var(f.var), rule,
                  "expected the inclusion of the bound variable on the left")
        try:
            ty = type_of(c.context, e.right, self.thy)
        except FormationError as exc:
            self.fail(rule, str(exc))
        self.need(isinstance(ty, SumT) and e.left.into == ty, rule, "inclusion type differs from the type of t")
        want = ty.left if inj is Inj1 else ty.right
        self.need(f.type == want, rule, "bound variable has the wrong summand type")
        return e.right

    def rule_case_cover(self, node, c, ps):
        self.need(isinstance(c.lhs, Truth), "case_cover", "left formula must be true")
        self.need(isinstance(c.rhs, Or), "case_cover", "right formula must be a disjunction")
        t1 = self._case_half("case_cover", c, c.rhs.left, Inj1)
        t2 = self._case_half("case_cover", c, c.rhs.right, Inj2)
        self.need(t1 == t2, "case_cover", "the two disjuncts mention different terms")

    def rule_case_disjoint(self, node, c, ps):
        self.need(isinstance(c.rhs, Falsity), "case_disjoint", "right formula must be false")
        self.need(isinstance(c.lhs, And), "case_disjoint", "left formula must be a conjunction")
        t1 = self._case_half("case_disjoint", c, c.lhs.left, Inj1)
        t2 = self._case_half("case_disjoint", c, c.lhs.right, Inj2)
        self.need(t1 == t2, "case_disjoint", "the two conjuncts mention different terms")

    def rule_singleton(self, node, c, ps):
        r = self._entailed_from_truth("singleton", c)
        self.need(isinstance(r.right, StarT), "singleton", "expected t = *")
        self.need(type_of(c.context, r.left, self.thy) == One(), "singleton", "t must have type 1")

    def rule_empty(self, node, c, ps):
        self.need(isinstance(c.lhs, Truth) and isinstance(c.rhs, Falsity), "empty",
                  "expected true |- false")
        self.need(any(isinstance(t, Zero) for t in c.context.types), "empty",
                  "context must contain a variable of the empty type")


_ARITY = {
    "identity": 0, "cut": 2, "substitution": 1, "eq_refl": 0, "eq_subst": 0,
    "eq_term": 0, "truth": 0, "falsity": 0, "conj_intro": 2, "conj_elim_left": 0,
    "conj_elim_right": 0, "disj_elim": 2, "disj_intro_left": 0, "disj_intro_right": 0,
    "distributivity": 0, "exists_down": 1, "exists_up": 1, "frobenius": 0,
    "exists_intro": 1, "exists_elim": 2, "axiom": 0, "proj1": 0, "proj2": 0,
    "pair": 0, "incl1": 0, "incl2": 0, "case_cover": 0, "case_disjoint": 0,
    "singleton": 0, "empty": 0,
}


def check_proof(proof: ProofTree, thy: Theory, disabled_rules=()) -> ProofCheck:
    """Check every node of a proof tree.

    Returns a :class:`ProofCheck` whose diagnostics name the offending rule.
    """
    ch = _Checker(thy, disabled_rules)
    ch.run(proof)
    return ProofCheck(not ch.diags, ch.diags)


def rules_used(proof: ProofTree) -> set:
    return {n.rule for n in proof.nodes()}
