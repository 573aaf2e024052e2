"""Command-line driver.

Exit status: 0 when the check passes, 1 when it finds a violation or a
countermodel, 2 for usage, parse and type errors.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .boolmat import bridge, eval_matrix, format_matrix
from .core import OlogError, format_expr, validate_presentation
from .export import category_of_elements, export_dot, export_sql, render_diagram
from .finrel import check_instance, eval_expr
from .linrel import eval_linrel
from .logic import (
    check_proof, format_context, format_formula, interpret, parse_judgement, parse_proofs,
    parse_signature_map, parse_theory, translate_to_logic,
)
from .search import SearchBudget, search
from .text import (
    format_pair, format_relation, parse_conjecture, parse_expr,
    parse_instance, parse_linear_instance, parse_olog, print_instance,
)


class UsageError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _olog(path):
    return parse_olog(_read(path))


def cmd_check(args, out):
    report = validate_presentation(_olog(args.olog))
    print(report, file=out)
    return 0 if report.ok else 1


def cmd_eval(args, out):
    pres = _olog(args.olog)
    expr = parse_expr(args.expr, pres)
    if args.backend == "linrel":
        linst = parse_linear_instance(_read(args.instance), pres)
        rel = eval_linrel(expr, linst, pres)
        # reuse the instance syntax for the resulting subspace
        vecs = ", ".join("(" + ", ".join(_q(v) for v in row) + ")" for row in rel.basis)
        print(f"span{{{vecs}}}", file=out)
        return 0
    inst = parse_instance(_read(args.instance), pres)
    if args.backend == "boolmat":
        print(format_matrix(eval_matrix(expr, bridge(inst), pres)), file=out)
    else:
        print(format_relation(eval_expr(expr, inst, pres), inst.carriers), file=out)
    return 0


def _q(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def cmd_verify(args, out):
    pres = _olog(args.olog)
    inst = parse_instance(_read(args.instance), pres)
    report = check_instance(inst, pres)
    for v in report.violations:
        lhs, rhs = format_expr(v.axiom.lhs), format_expr(v.axiom.rhs)
        print(f"violation\taxiom {v.index}\t{lhs} => {rhs}\twitness {format_pair(v.witness)}",
              file=out)
    print(f"{report.checked} axioms checked, {len(report)} violated", file=out)
    return 0 if report.ok else 1


def cmd_prove(args, out):
    thy = parse_theory(_read(args.theory))
    proofs = parse_proofs(_read(args.proof))
    failed = 0
    for name, proof in proofs.items():
        result = check_proof(proof, thy, disabled_rules=tuple(args.disable or ()))
        if result.ok:
            print(f"ok\t{name}", file=out)
        else:
            failed += 1
            for d in result.diagnostics:
                print(f"FAIL\t{name}\t{d}", file=out)
    return 1 if failed else 0


def cmd_interpret(args, out):
    thy = parse_theory(_read(args.theory))
    base = os.path.dirname(os.path.abspath(args.map))
    pres, smap = parse_signature_map(_read(args.map), base)
    ctx, phi = parse_judgement(args.formula)
    print(format_expr(interpret(ctx, phi, thy, pres, smap)), file=out)
    return 0


def cmd_translate(args, out):
    pres = _olog(args.olog)
    ctx, f = translate_to_logic(parse_expr(args.expr, pres), pres)
    print(f"{format_context(ctx)} {format_formula(f)}", file=out)
    return 0


def cmd_search(args, out):
    pres = _olog(args.olog)
    lhs, rhs = parse_conjecture(args.conjecture, pres)
    budget = SearchBudget(args.bound, max_models=args.max_models, timeout=args.timeout)
    result = search(pres, lhs, rhs, budget)
    if result.found:
        print(f"countermodel after {result.models_checked} models; "
              f"witness {format_pair(result.witness)}", file=out)
        print(print_instance(result.countermodel, pres), end="", file=out)
        return 1
    if result.truncated is not None:
        print(f"search truncated after {result.models_checked} models: "
              f"{result.truncated.reason}", file=out)
        return 0
    print(f"no countermodel up to bound {args.bound} ({result.models_checked} models checked)",
          file=out)
    return 0


def cmd_export_sql(args, out):
    pres = _olog(args.olog)
    inst = parse_instance(_read(args.instance), pres)
    ddl, tables = export_sql(inst, pres, fold_maps=args.fold_maps)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "schema.sql"), "w", encoding="utf-8") as fh:
            fh.write(ddl)
        for name, text in tables.items():
            with open(os.path.join(args.out, f"{name}.csv"), "w", encoding="utf-8") as fh:
                fh.write(text)
        print(f"wrote schema.sql and {len(tables)} tables to {args.out}", file=out)
        return 0
    print(ddl, file=out)
    for name, text in tables.items():
        print(f"-- {name}.csv", file=out)
        print(text, file=out)
    return 0


def cmd_export_graph(args, out):
    pres = _olog(args.olog)
    inst = parse_instance(_read(args.instance), pres)
    g = category_of_elements(inst, pres, types=args.types, relations=args.relations,
                             undirected_symmetric=args.undirected_symmetric,
                             product_vertices=args.product_vertices)
    print(export_dot(g), end="", file=out)
    return 0


def cmd_render(args, out):
    pres = _olog(args.olog)
    print(render_diagram(parse_expr(args.expr, pres), pres, args.format), end="", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relolog", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"relolog {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="validate an olog")
    s.add_argument("olog")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("eval", help="evaluate an expression on an instance")
    s.add_argument("olog")
    s.add_argument("instance")
    s.add_argument("-e", "--expr", required=True)
    s.add_argument("--backend", choices=["finrel", "boolmat", "linrel"], default="finrel")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("verify", help="check an instance against the axioms")
    s.add_argument("olog")
    s.add_argument("instance")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("prove", help="check every proof in a proof file")
    s.add_argument("theory")
    s.add_argument("proof")
    s.add_argument("--disable", action="append", metavar="RULE",
                   help="treat RULE as unavailable (repeatable)")
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("interpret", help="morphism expression of a formula in context")
    s.add_argument("theory")
    s.add_argument("map", help="signature map file naming the olog")
    s.add_argument("-f", "--formula", required=True, help="'[x:A; y:B] formula'")
    s.set_defaults(func=cmd_interpret)

    s = sub.add_parser("translate", help="formula of a morphism expression")
    s.add_argument("olog")
    s.add_argument("-e", "--expr", required=True)
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("search", help="look for a countermodel to a subsumption")
    s.add_argument("olog")
    s.add_argument("--conjecture", required=True, help="'L => R'")
    s.add_argument("--bound", type=int, default=2)
    s.add_argument("--max-models", type=int)
    s.add_argument("--timeout", type=float, help="seconds")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("export-sql", help="DDL and CSV tables for an instance")
    s.add_argument("olog")
    s.add_argument("instance")
    s.add_argument("--fold-maps", action="store_true")
    s.add_argument("--out", help="directory for schema.sql and the CSV files")
    s.set_defaults(func=cmd_export_sql)

    s = sub.add_parser("export-graph", help="DOT graph of the category of elements")
    s.add_argument("olog")
    s.add_argument("instance")
    s.add_argument("--undirected-symmetric", action="store_true")
    s.add_argument("--product-vertices", action="store_true")
    s.add_argument("--types", nargs="+", metavar="TYPE")
    s.add_argument("--relations", nargs="+", metavar="REL")
    s.set_defaults(func=cmd_export_graph)

    s = sub.add_parser("render", help="string diagram of an expression")
    s.add_argument("olog")
    s.add_argument("-e", "--expr", required=True)
    s.add_argument("--format", choices=["dot", "tikz", "json"], default="dot")
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args, out)
    except (UsageError, OlogError) as exc:
        print(f"relolog {args.command}: {exc}", file=err)
        return 2


if __name__ == "__main__":
    sys.exit(main())
