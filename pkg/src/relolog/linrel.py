"""Linear relations over the rationals.

A linear relation ``L: Q^n -> Q^m`` is a subspace of ``Q^(n+m)``, stored as
the rows of its reduced row-echelon basis.  The RREF is unique, so equality of
relations is equality of bases.  Both monoidal products act as direct sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Ob, ObSum, ObTensor, OlogError, OlogPresentation, UnitI, ZeroO,
    infer_type, normalize_object,
    Braid, Bottom, CoCopy, CoCreate, CoDelete, CoMerge, Compose, Copy, Counit,
    Create, Dagger, Delete, Distribute, DistributeInv, Gen, Id, Join, Meet, Merge,
    SumBraid, SumTensor, Tensor, Top, Unit,
)
from .finrel import UnboundGenerator


class DimensionMismatch(OlogError):
    pass


class UnsupportedConstructor(OlogError):
    pass


# ---------------------------------------------------------------------------
# exact row reduction

def rref(rows, width: int) -> tuple:
    """Reduced row-echelon basis of the span of ``rows`` (zero rows dropped)."""
    m = [[Fraction(v) for v in r] for r in rows]
    pivot_row = 0
    for col in range(width):
        if pivot_row == len(m):
            break
        src = next((i for i in range(pivot_row, len(m)) if m[i][col] != 0), None)
        if src is None:
            continue
        m[pivot_row], m[src] = m[src], m[pivot_row]
        p = m[pivot_row][col]
        if p != 1:
            m[pivot_row] = [v / p for v in m[pivot_row]]
        prow = m[pivot_row]
        for i in range(len(m)):
            if i != pivot_row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], prow)]
        pivot_row += 1
    return tuple(tuple(r) for r in m[:pivot_row])


def pivots(basis) -> list:
    out = []
    for r in basis:
        out.append(next(i for i, v in enumerate(r) if v != 0))
    return out


def nullspace(rows, width: int) -> tuple:
    """Basis of ``{x : r . x = 0 for every row r}``."""
    red = rref(rows, width)
    piv = pivots(red)
    free = [c for c in range(width) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * width
        v[f] = Fraction(1)
        for r, p in zip(red, piv):
            v[p] = -r[f]
        basis.append(v)
    return tuple(tuple(v) for v in basis)


# ---------------------------------------------------------------------------
# linear relations

@dataclass(frozen=True)
class LinRel:
    dom_dim: int
    cod_dim: int
    basis: tuple

    @staticmethod
    def span(dom_dim, cod_dim, rows) -> "LinRel":
        width = dom_dim + cod_dim
        rows = list(rows)
        for r in rows:
            if len(r) != width:
                raise DimensionMismatch(f"vector of length {len(r)} in Q^{width}")
        return LinRel(dom_dim, cod_dim, rref(rows, width))

    @property
    def width(self):
        return self.dom_dim + self.cod_dim

    @property
    def rank(self):
        return len(self.basis)

    @property
    def pivot_columns(self):
        return pivots(self.basis)

    def contains_vector(self, v) -> bool:
        return rref(list(self.basis) + [v], self.width) == self.basis

    def __le__(self, other: "LinRel") -> bool:
        _same_dims(self, other)
        return all(other.contains_vector(r) for r in self.basis)

    def transpose(self) -> "LinRel":
        n = self.dom_dim
        return LinRel.span(self.cod_dim, self.dom_dim, [r[n:] + r[:n] for r in self.basis])


def _same_dims(a, b):
    if (a.dom_dim, a.cod_dim) != (b.dom_dim, b.cod_dim):
        raise DimensionMismatch(
            f"{a.dom_dim}->{a.cod_dim} vs {b.dom_dim}->{b.cod_dim}")


def _unit_vec(n, i):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def graph(matrix, dom_dim=None) -> LinRel:
    """Graph ``{(u, uA)}`` of the linear map with ``cod x dom`` matrix rows.

    ``matrix[j][i]`` is the coefficient of input ``i`` in output ``j``.
    """
    m = [[Fraction(v) for v in row] for row in matrix]
    n = dom_dim if dom_dim is not None else (len(m[0]) if m else 0)
    k = len(m)
    rows = [_unit_vec(n, i) + [m[j][i] for j in range(k)] for i in range(n)]
    return LinRel.span(n, k, rows)


def scalar(c) -> LinRel:
    return graph([[c]])


def lin_identity(n) -> LinRel:
    return LinRel.span(n, n, [_unit_vec(n, i) * 1 + _unit_vec(n, i) for i in range(n)])


def full(n, m) -> LinRel:
    return LinRel.span(n, m, [_unit_vec(n + m, i) for i in range(n + m)])


def zero(n, m) -> LinRel:
    return LinRel(n, m, ())


def lin_compose(l: LinRel, m: LinRel) -> LinRel:
    """Relational composite: ``(u, w)`` with some ``v`` in ``L(u, v)`` and ``M(v, w)``."""
    if l.cod_dim != m.dom_dim:
        raise DimensionMismatch(f"cannot compose {l.dom_dim}->{l.cod_dim} with "
                                f"{m.dom_dim}->{m.cod_dim}")
    nu, nv, nw = l.dom_dim, l.cod_dim, m.cod_dim
    # columns ordered (v, u, w) so that eliminating v comes first
    rows = []
    for r in l.basis:
        rows.append(list(r[nu:]) + list(r[:nu]) + [Fraction(0)] * nw)
    for r in m.basis:
        rows.append([-x for x in r[:nv]] + [Fraction(0)] * nu + list(r[nv:]))
    red = rref(rows, nv + nu + nw)
    kept = [r[nv:] for r, p in zip(red, pivots(red)) if p >= nv]
    return LinRel.span(nu, nw, kept)


def lin_tensor(l: LinRel, m: LinRel) -> LinRel:
    """Direct sum of linear relations."""
    a, b = l.dom_dim, l.cod_dim
    c, d = m.dom_dim, m.cod_dim
    rows = []
    for r in l.basis:
        rows.append(list(r[:a]) + [0] * c + list(r[a:]) + [0] * d)
    for r in m.basis:
        rows.append([0] * a + list(r[:c]) + [0] * b + list(r[c:]))
    return LinRel.span(a + c, b + d, rows)


def lin_join(l: LinRel, m: LinRel) -> LinRel:
    _same_dims(l, m)
    return LinRel.span(l.dom_dim, l.cod_dim, list(l.basis) + list(m.basis))


def lin_meet(l: LinRel, m: LinRel) -> LinRel:
    _same_dims(l, m)
    w = l.width
    # intersection = annihilator of (annihilator(L) + annihilator(M))
    ann = list(nullspace(l.basis, w)) + list(nullspace(m.basis, w))
    return LinRel.span(l.dom_dim, l.cod_dim, nullspace(ann, w))


def lin_subsumes(l: LinRel, m: LinRel) -> bool:
    return l <= m


def lin_structural(kind: str, *dims: int) -> LinRel:
    if kind == "Identity":
        n, = dims
        return lin_identity(n)
    if kind == "Copy":
        n, = dims
        return LinRel.span(n, 2 * n, [_unit_vec(n, i) + _unit_vec(n, i) + _unit_vec(n, i)
                                      for i in range(n)])
    if kind == "Merge":
        return lin_structural("Copy", *dims).transpose()
    if kind == "Delete":
        n, = dims
        return full(n, 0)
    if kind == "Create":
        n, = dims
        return full(0, n)
    if kind == "CoMerge":
        n, = dims
        rows = [_unit_vec(n, i) + [Fraction(0)] * n + _unit_vec(n, i) for i in range(n)]
        rows += [[Fraction(0)] * n + _unit_vec(n, i) + _unit_vec(n, i) for i in range(n)]
        return LinRel.span(2 * n, n, rows)
    if kind == "CoCopy":
        return lin_structural("CoMerge", *dims).transpose()
    if kind == "CoCreate":
        n, = dims
        return zero(0, n)
    if kind == "CoDelete":
        n, = dims
        return zero(n, 0)
    if kind == "Braid":
        n, m = dims
        rows = []
        for i in range(n):
            rows.append(_unit_vec(n + m, i) + _unit_vec(n + m, m + i))
        for j in range(m):
            rows.append(_unit_vec(n + m, n + j) + _unit_vec(n + m, j))
        return LinRel.span(n + m, n + m, rows)
    raise ValueError(f"unknown structural kind {kind!r}")


def lin_dim(obj, dims) -> int:
    if isinstance(obj, Ob):
        return dims[obj.name]
    if isinstance(obj, (UnitI, ZeroO)):
        return 0
    if isinstance(obj, ObTensor):
        return sum(lin_dim(f, dims) for f in obj.factors)
    if isinstance(obj, ObSum):
        return sum(lin_dim(s, dims) for s in obj.summands)
    raise TypeError(obj)


@dataclass(frozen=True)
class LinearInstance:
    dims: dict
    relations: dict


def eval_linrel(expr, linst: LinearInstance, pres: OlogPresentation) -> LinRel:
    memo = {}

    def d(obj):
        return lin_dim(normalize_object(obj), linst.dims)

    def go(e):
        if e in memo:
            return memo[e]
        out = _eval(e)
        memo[e] = out
        return out

    def _eval(e):
        if isinstance(e, Gen):
            if e.name not in linst.relations:
                pres.signature(e.name)
                raise UnboundGenerator(e.name)
            return linst.relations[e.name]
        if isinstance(e, Compose):
            r = go(e.parts[0])
            for p in e.parts[1:]:
                r = lin_compose(r, go(p))
            return r
        if isinstance(e, (Tensor, SumTensor)):
            r = LinRel(0, 0, ())
            for p in e.parts:
                r = lin_tensor(r, go(p))
            return r
        if isinstance(e, Id):
            return lin_identity(d(e.obj))
        if isinstance(e, (Braid, SumBraid)):
            return lin_structural("Braid", d(e.x), d(e.y))
        if isinstance(e, (Distribute, DistributeInv)):
            raise UnsupportedConstructor(
                "distribute has no meaning when both products are direct sums")
        if isinstance(e, (Copy, Merge, Delete, Create, CoMerge, CoCopy, CoCreate, CoDelete)):
            return lin_structural(type(e).__name__, d(e.x))
        if isinstance(e, Unit):
            n = d(e.x)
            return lin_compose(full(0, n), lin_structural("Copy", n))
        if isinstance(e, Counit):
            n = d(e.x)
            return lin_compose(lin_structural("Merge", n), full(n, 0))
        if isinstance(e, Top):
            return full(d(e.dom), d(e.cod))
        if isinstance(e, Bottom):
            return zero(d(e.dom), d(e.cod))
        if isinstance(e, Dagger):
            return go(e.inner).transpose()
        if isinstance(e, Meet):
            return lin_meet(go(e.left), go(e.right))
        if isinstance(e, Join):
            return lin_join(go(e.left), go(e.right))
        raise OlogError(f"cannot evaluate {e!r}")

    infer_type(expr, pres)
    return go(expr)


def is_map(l: LinRel) -> bool:
    """True iff ``l`` is the graph of a linear map ``Q^dom -> Q^cod``."""
    n = l.dom_dim
    return l.rank == n and l.pivot_columns == list(range(n))


def map_matrix(l: LinRel):
    """The ``cod x dom`` matrix of a relation that is a map."""
    if not is_map(l):
        raise ValueError("not the graph of a linear map")
    n = l.dom_dim
    return [[l.basis[i][n + j] for i in range(n)] for j in range(l.cod_dim)]


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_basis(l: LinRel) -> str:
    return "\n".join(" ".join(format_fraction(v) for v in row) for row in l.basis)
