"""Instance data as SQL tables and graphs, and expressions as string diagrams."""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field

from .core import (
    Ob, ObTensor, OlogError, OlogPresentation, UnitI, desugar, factors,
    format_expr, format_object, infer_type, normalize_strict, osum, otensor, summands,
    Bottom, CoCopy, CoCreate, CoDelete, CoMerge, Compose, Copy, Counit, Create, Dagger,
    Delete, Distribute, DistributeInv, Gen, Id, Join, Meet, Merge, SumBraid, SumTensor,
    Braid, Tensor, Top, Unit,
)
from .finrel import FinRelation, Instance, classify_map
from .text import _format_tagged, parse_element


class ExportError(OlogError):
    pass


class FoldConflict(ExportError):
    def __init__(self, table, column):
        super().__init__(f"folded column {column!r} clashes with an existing column of {table!r}")
        self.table = table
        self.column = column


class UnsupportedFormat(ExportError):
    pass


# ---------------------------------------------------------------------------
# relational databases

def _quote(name: str) -> str:
    return '"' + name.replace('"', '""') + '"'


def _columns(dom, cod):
    """Column (name, object) list of an association table: dom factors, then cod factors."""
    objs = list(factors(dom)) + list(factors(cod))
    bases = [o.name if isinstance(o, Ob) else format_object(o) for o in objs]
    counts = Counter(bases)
    seen = Counter()
    out = []
    for b, o in zip(bases, objs):
        if counts[b] > 1:
            seen[b] += 1
            out.append((f"{b} {seen[b]}", o))
        else:
            out.append((b, o))
    return out


def _cells(elem, obj):
    if isinstance(obj, UnitI):
        return []
    return list(elem) if isinstance(obj, ObTensor) else [elem]


def _text(elem, obj) -> str:
    return elem if isinstance(obj, Ob) else _format_tagged(elem, obj)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(sorted(rows))
    return buf.getvalue()


def attribute_types(pres: OlogPresentation) -> set:
    """Basic types that occur in no generator's domain, such as Number or String."""
    used = set()
    for dom, _ in pres.relation_generators.values():
        used.update(f.name for f in factors(dom) if isinstance(f, Ob))
    return set(pres.type_generators) - used


def foldable(inst: Instance, pres: OlogPresentation) -> list:
    """Generators stored as columns by ``fold_maps=True``.

    These are single-valued relations between basic types whose codomain is an
    attribute type; relations that are not total are folded with NULLs.
    """
    attrs = attribute_types(pres)
    out = []
    for name, (dom, cod) in pres.relation_generators.items():
        if isinstance(dom, Ob) and isinstance(cod, Ob) and cod.name in attrs:
            if classify_map(inst.relations[name], inst.carriers).partial_function:
                out.append(name)
    return out


def export_sql(inst: Instance, pres: OlogPresentation, fold_maps=False):
    """DDL text and one CSV text per table.

    ``fold_maps`` is a bool (fold every :func:`foldable` generator) or an
    explicit collection of generator names.
    """
    if fold_maps is True:
        folded = foldable(inst, pres)
    else:
        folded = list(fold_maps or ())
    by_table = {t: [] for t in pres.type_generators}
    for name in folded:
        dom, cod = pres.relation_generators[name]
        if not (isinstance(dom, Ob) and isinstance(cod, Ob)):
            raise ExportError(f"cannot fold {name!r}: its domain and codomain must be basic types")
        if not classify_map(inst.relations[name], inst.carriers).partial_function:
            raise ExportError(f"cannot fold {name!r}: it is not single-valued")
        cols = by_table[dom.name]
        if name == "ID" or name in [c for c, _ in cols]:
            raise FoldConflict(dom.name, name)
        cols.append((name, cod.name))

    ddl, tables = [], {}
    for t in pres.type_generators:
        lines = [f"  {_quote('ID')} TEXT PRIMARY KEY"]
        lines += [f"  {_quote(c)} TEXT REFERENCES {_quote(ref)}({_quote('ID')})"
                  for c, ref in by_table[t]]
        ddl.append(f"CREATE TABLE {_quote(t)} (\n" + ",\n".join(lines) + "\n);")
        values = {c: dict(inst.relations[c].pairs) for c, _ in by_table[t]}
        rows = [[x] + [values[c].get(x, "") for c, _ in by_table[t]]
                for x in inst.carriers.get(t, ())]
        tables[t] = _csv(["ID"] + [c for c, _ in by_table[t]], rows)

    for name, (dom, cod) in pres.relation_generators.items():
        if name in folded:
            continue
        cols = _columns(dom, cod)
        lines = []
        for c, o in cols:
            ref = f" REFERENCES {_quote(o.name)}({_quote('ID')})" if isinstance(o, Ob) else ""
            lines.append(f"  {_quote(c)} TEXT NOT NULL{ref}")
        if cols:
            lines.append("  PRIMARY KEY (" + ", ".join(_quote(c) for c, _ in cols) + ")")
        if name in tables:
            raise ExportError(f"relation {name!r} has the same table name as a type")
        ddl.append(f"CREATE TABLE {_quote(name)} (\n" + ",\n".join(lines) + "\n);")
        objs = [o for _, o in cols]
        rows = []
        for x, y in inst.relations[name].pairs:
            cells = _cells(x, dom) + _cells(y, cod)
            rows.append([_text(v, o) for v, o in zip(cells, objs)])
        tables[name] = _csv([c for c, _ in cols], rows)
    return "\n\n".join(ddl) + "\n", tables


def _read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def _uncells(cells, obj):
    if isinstance(obj, UnitI):
        return ()
    if isinstance(obj, ObTensor):
        return tuple(cells)
    return cells[0]


def import_sql(tables: dict, pres: OlogPresentation) -> Instance:
    """Rebuild an instance from the CSVs of :func:`export_sql`.

    Columns beyond ``ID`` in an entity table are read back as folded generators.
    Carriers come back in sorted order.
    """
    carriers, pairs = {}, {n: set() for n in pres.relation_generators}
    for t in pres.type_generators:
        header, rows = _read_csv(tables[t])
        carriers[t] = tuple(r[0] for r in rows)
        for j, col in enumerate(header[1:], 1):
            for r in rows:
                if r[j] != "":
                    pairs[col].add((r[0], r[j]))
    for name, (dom, cod) in pres.relation_generators.items():
        if name not in tables:
            continue
        cols = _columns(dom, cod)
        _, rows = _read_csv(tables[name])
        k = len(factors(dom))
        for r in rows:
            cells = [v if isinstance(o, Ob) else parse_element(v, o) for v, (_, o) in zip(r, cols)]
            pairs[name].add((_uncells(cells[:k], dom), _uncells(cells[k:], cod)))
    return Instance(carriers, {n: FinRelation(*pres.relation_generators[n], p)
                               for n, p in pairs.items()})


# ---------------------------------------------------------------------------
# graphs

@dataclass
class ElementsGraph:
    """Vertices ``(type, element)`` and labelled edges between them."""
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    undirected: set = field(default_factory=set)   # labels drawn without arrowheads
    name: str = "elements"


def _vertex_type(obj):
    return obj.name if isinstance(obj, Ob) else format_object(obj)


def category_of_elements(inst: Instance, pres: OlogPresentation, types=None, relations=None,
                         undirected_symmetric=False, product_vertices=False) -> ElementsGraph:
    """The graph of elements of an instance.

    By default vertices are elements of basic types and edges come from
    generators between basic types.  ``product_vertices`` adds a vertex for each
    element of a compound domain or codomain that carries data, with projection
    edges ``pi1``, ``pi2``, ... to its components.  ``types`` and ``relations``
    restrict the graph to the named generators.
    """
    types = list(pres.type_generators) if types is None else [t for t in pres.type_generators
                                                               if t in set(types)]
    keep = set(types)
    g = ElementsGraph(name=pres.name or "elements")
    g.vertices = [(t, x) for t in types for x in inst.carriers.get(t, ())]
    extra = []

    def vertex(elem, obj):
        if isinstance(obj, Ob):
            return (obj.name, elem) if obj.name in keep else None
        if not product_vertices or not isinstance(obj, ObTensor):
            return None
        v = (_vertex_type(obj), elem)
        parts = [vertex(e, f) for e, f in zip(elem, obj.factors)]
        if any(p is None for p in parts):
            return None
        if v not in extra:
            extra.append(v)
            for i, p in enumerate(parts):
                g.edges.append((v, f"pi{i + 1}", p))
        return v

    names = list(pres.relation_generators) if relations is None else \
        [r for r in pres.relation_generators if r in set(relations)]
    order = {}
    for name in names:
        dom, cod = pres.relation_generators[name]
        rel = inst.relations[name]
        symmetric = undirected_symmetric and dom == cod and rel == rel.transpose()
        if symmetric:
            g.undirected.add(name)
        for x, y in sorted(rel.pairs, key=repr):
            s, d = vertex(x, dom), vertex(y, cod)
            if s is None or d is None:
                continue
            if symmetric and (d, name, s) in order:
                continue
            order[(s, name, d)] = None
    g.vertices += sorted(extra, key=repr)
    pos = {v: i for i, v in enumerate(g.vertices)}
    g.edges = sorted(set(g.edges) | set(order), key=lambda e: (pos[e[0]], e[1], pos[e[2]]))
    return g


def _dot_id(text):
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _vertex_name(v):
    t, x = v
    return f"{t}:{x if isinstance(x, str) else _format_elem(x)}"


def _format_elem(x):
    from .text import format_element
    return format_element(x)


def export_dot(g: ElementsGraph) -> str:
    lines = [f"digraph {_dot_id(g.name)} {{"]
    for v in g.vertices:
        t, x = v
        label = f"{x if isinstance(x, str) else _format_elem(x)}\\n{t}"
        lines.append(f"  {_dot_id(_vertex_name(v))} [label=\"{label}\"];")
    for s, label, d in g.edges:
        attrs = f"label={_dot_id(label)}"
        if label in g.undirected:
            attrs += ", dir=none"
        lines.append(f"  {_dot_id(_vertex_name(s))} -> {_dot_id(_vertex_name(d))} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# string diagrams

_SUM_NODES = (SumBraid, CoMerge, CoCreate, CoCopy, CoDelete, Distribute, DistributeInv)
_STRUCTURAL = (Copy, Delete, Merge, Create, Braid) + _SUM_NODES


@dataclass
class Box:
    id: str
    kind: str
    label: str
    inputs: list
    outputs: list
    style: str = "plain"            # plain | structural | sum
    inner: "DiagramIR | None" = None

    def to_dict(self):
        d = {"id": self.id, "kind": self.kind, "label": self.label,
             "inputs": self.inputs, "outputs": self.outputs, "style": self.style}
        if self.inner is not None:
            d["inner"] = self.inner.to_dict()
        return d


@dataclass
class DiagramIR:
    """Layered string diagram.

    Ports are ``[box id, index]`` pairs; the diagram's own boundary uses the box
    ids ``"in"`` and ``"out"``.  Wires carry the text of their object.
    """
    inputs: list
    outputs: list
    layers: list = field(default_factory=list)
    wires: list = field(default_factory=list)

    def to_dict(self):
        return {"inputs": self.inputs, "outputs": self.outputs,
                "layers": [[b.to_dict() for b in layer] for layer in self.layers],
                "wires": [{"src": list(s), "dst": list(d), "object": o} for s, d, o in self.wires]}


def _prepare(expr, pres):
    """Desugar derived nodes, keeping transposed generators as single boxes."""
    if isinstance(expr, Dagger) and isinstance(expr.inner, Gen):
        return expr
    if isinstance(expr, (Compose, Tensor, SumTensor)):
        return type(expr)(tuple(_prepare(p, pres) for p in expr.parts))
    if isinstance(expr, Meet):
        x, y = infer_type(expr, pres)
        return Compose((Copy(x), Tensor((_prepare(expr.left, pres), _prepare(expr.right, pres))),
                        Merge(y)))
    if isinstance(expr, Join):
        x, y = infer_type(expr, pres)
        return Compose((CoCopy(x), SumTensor((_prepare(expr.left, pres),
                                              _prepare(expr.right, pres))), CoMerge(y)))
    return desugar(expr, pres)


def _kind(e):
    return type(e).__name__.lower()


class _Layout:
    def __init__(self, pres, prefix=""):
        self.pres = pres
        self.prefix = prefix
        self.count = 0

    def fresh(self):
        self.count += 1
        return f"{self.prefix}b{self.count}"

    def build(self, expr) -> DiagramIR:
        dom, _ = infer_type(expr, self.pres)
        layers = list(expr.parts) if isinstance(expr, Compose) else [expr]
        start = factors(dom)
        ir = DiagramIR([format_object(o) for o in start], [])
        # the boundary between layers: a product mode and its wires (port, object)
        mode, wires = "tensor", [(("in", i), o) for i, o in enumerate(start)]
        for layer in layers:
            slice_, mode, wires = self._layer(layer, mode, wires, ir)
            if slice_:
                ir.layers.append(slice_)
        ir.outputs = [format_object(o) for _, o in wires]
        for i, (port, o) in enumerate(wires):
            ir.wires.append((port, ("out", i), format_object(o)))
        return ir

    def _layer(self, layer, mode, wires, ir):
        if isinstance(layer, (Tensor, SumTensor)):
            lmode, parts = ("tensor" if isinstance(layer, Tensor) else "sum"), layer.parts
        else:
            lmode, parts = mode, (layer,)
        join = otensor if lmode == "tensor" else osum
        if len(parts) == 1:
            groups = [wires]
        else:
            if lmode != mode:
                if len(wires) != 1:
                    raise UnsupportedFormat(
                        "a layer splits by one monoidal product a boundary made of the other; "
                        "mixed tensor and sum structure has no unambiguous layout")
                port, obj = wires[0]
                split = factors(obj) if lmode == "tensor" else summands(obj)
                wires = [(port, o) for o in split]
            groups, k = [], 0
            for p in parts:
                d = infer_type(p, self.pres)[0]
                n = 0
                while join(*(o for _, o in wires[k:k + n])) != d:
                    n += 1
                    if k + n > len(wires):
                        raise UnsupportedFormat(f"no wire grouping matches {format_expr(p)}")
                groups.append(wires[k:k + n])
                k += n
            if k != len(wires):
                raise UnsupportedFormat("layer does not consume every wire")
        slice_, out = [], []
        for p, ins in zip(parts, groups):
            if isinstance(p, Id):
                out.extend(ins)
                continue
            cod = infer_type(p, self.pres)[1]
            omode = lmode if len(parts) > 1 else \
                ("sum" if isinstance(p, (SumBraid, CoCopy, Distribute, SumTensor)) else "tensor")
            outs = factors(cod) if omode == "tensor" else summands(cod)
            b = self._box(p, [format_object(o) for _, o in ins], [format_object(o) for o in outs])
            slice_.append(b)
            for i, (port, o) in enumerate(ins):
                ir.wires.append((port, (b.id, i), format_object(o)))
            out.extend(((b.id, i), o) for i, o in enumerate(outs))
        return slice_, (lmode if len(parts) > 1 else omode if slice_ else mode), out

    def _box(self, p, ins, outs):
        bid = self.fresh()
        if isinstance(p, Gen):
            return Box(bid, "generator", p.name, ins, outs)
        if isinstance(p, Dagger):
            return Box(bid, "dagger", p.inner.name + "\u2020", ins, outs)
        if isinstance(p, (Top, Bottom, Unit, Counit)):
            return Box(bid, _kind(p), format_expr(p), ins, outs, "structural")
        if isinstance(p, _STRUCTURAL):
            return Box(bid, _kind(p), format_expr(p), ins, outs,
                       "sum" if isinstance(p, _SUM_NODES) else "structural")
        inner = _Layout(self.pres, prefix=f"{bid}.").build(p)
        return Box(bid, "composite", format_expr(p), ins, outs, inner=inner)


def diagram(expr, pres: OlogPresentation) -> DiagramIR:
    """Layered diagram of an expression after desugaring and strict normalization."""
    infer_type(expr, pres)
    # normalize first so that bracketing cannot change which nodes stay boxes
    return _Layout(pres).build(normalize_strict(_prepare(normalize_strict(expr), pres)))


def _dot_diagram(ir: DiagramIR) -> str:
    """Graphviz text; composite boxes are drawn as single boxes."""
    lines = ["digraph diagram {", "  rankdir=LR;", "  node [fontsize=10];"]
    for i, o in enumerate(ir.inputs):
        lines.append(f"  {_dot_id(f'in{i}')} [shape=point];")
    for layer in ir.layers:
        for b in layer:
            if b.style == "plain":
                attrs = f"shape=box, label={_dot_id(b.label)}"
            elif b.style == "sum":
                attrs = f"shape=circle, style=filled, fillcolor=black, width=0.15, " \
                        f"label=\"\", xlabel={_dot_id(b.kind)}"
            else:
                attrs = f"shape=circle, width=0.15, label=\"\", xlabel={_dot_id(b.kind)}"
            lines.append(f"  {_dot_id(b.id)} [{attrs}];")
    for i, o in enumerate(ir.outputs):
        lines.append(f"  {_dot_id(f'out{i}')} [shape=point];")
    for s, d, o in ir.wires:
        lines.append(f"  {_dot_id(_tikz_port(s))} -> {_dot_id(_tikz_port(d))} "
                     f"[label={_dot_id(o)}, arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _tikz_diagram(ir: DiagramIR) -> str:
    lines = ["\\begin{tikzpicture}[x=2cm, y=1cm, >=latex]",
             "  \\tikzset{gen/.style={draw, rectangle, minimum size=6mm},",
             "           node/.style={draw, circle, inner sep=1.5pt},",
             "           sumnode/.style={draw, circle, fill, inner sep=1.5pt}}"]
    for i, o in enumerate(ir.inputs):
        lines.append(f"  \\coordinate (in{i}) at (0,{-i});")
    for li, layer in enumerate(ir.layers, 1):
        for bi, b in enumerate(layer):
            style = {"plain": "gen", "structural": "node", "sum": "sumnode"}[b.style]
            label = _tex(b.label) if b.style == "plain" or b.inner is not None else ""
            if b.inner is not None:
                style = "gen"
            lines.append(f"  \\node[{style}] ({_tikz_name(b.id)}) at ({li},{-bi}) {{{label}}};")
    n = len(ir.layers) + 1
    for i, o in enumerate(ir.outputs):
        lines.append(f"  \\coordinate (out{i}) at ({n},{-i});")
    for s, d, o in ir.wires:
        lines.append(f"  \\draw ({_tikz_name(_tikz_port(s))}) -- node[above, font=\\tiny] "
                     f"{{{_tex(o)}}} ({_tikz_name(_tikz_port(d))});")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines) + "\n"


def _tex(text):
    out = text
    for a, b in (("\\", "\\textbackslash{}"), ("_", "\\_"), ("&", "\\&"), ("%", "\\%"),
                 ("#", "\\#"), ("\u2020", "$^\\dagger$")):
        out = out.replace(a, b)
    return out


def _tikz_name(bid):
    return bid.replace(".", "-")


def _tikz_port(port):
    box, i = port
    if box in ("in", "out"):
        return f"{box}{i}"
    return box


def render_diagram(expr, pres: OlogPresentation, format="dot") -> str:
    if format not in ("dot", "tikz", "json"):
        raise UnsupportedFormat(f"unknown diagram format {format!r}; use dot, tikz or json")
    ir = diagram(expr, pres)
    if format == "json":
        return json.dumps(ir.to_dict(), indent=2, sort_keys=True) + "\n"
    if format == "dot":
        return _dot_diagram(ir)
    return _tikz_diagram(ir)


__all__ = [
    "ExportError", "FoldConflict", "UnsupportedFormat", "attribute_types", "foldable",
    "export_sql", "import_sql", "ElementsGraph", "category_of_elements", "export_dot",
    "Box", "DiagramIR", "diagram", "render_diagram",
]
