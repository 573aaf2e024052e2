"""Boolean-matrix semantics with Kronecker and direct-sum products."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Ob, ObSum, ObTensor, OlogError, OlogPresentation, UnitI, ZeroO,
    infer_type, normalize_object,
    Braid, Bottom, CoCopy, CoCreate, CoDelete, CoMerge, Compose, Copy, Counit,
    Create, Dagger, Delete, Distribute, DistributeInv, Gen, Id, Join, Meet, Merge,
    SumBraid, SumTensor, Tensor, Top, Unit,
)
from .finrel import Instance, UnboundGenerator, carrier

MAX_ENTRIES = 1 << 20


class DimensionMismatch(OlogError):
    pass


def _check_size(rows, cols):
    if rows * cols > MAX_ENTRIES:
        raise DimensionMismatch(f"{rows}x{cols} matrix exceeds {MAX_ENTRIES} entries")


def zeros(rows, cols):
    _check_size(rows, cols)
    return np.zeros((rows, cols), dtype=bool)


def identity(n):
    _check_size(n, n)
    return np.eye(n, dtype=bool)


def as_matrix(rows) -> np.ndarray:
    return np.array(rows, dtype=bool).reshape(len(rows), -1 if len(rows) else 0)


def mat_compose(a, b):
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot compose {a.shape} with {b.shape}")
    _check_size(a.shape[0], b.shape[1])
    # integer product then threshold; exact for any realistic inner dimension
    return (a.astype(np.int64) @ b.astype(np.int64)) > 0


def mat_kron(a, b):
    _check_size(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    return np.kron(a, b).astype(bool)


def mat_dsum(a, b):
    out = zeros(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
    out[:a.shape[0], :a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def _perm(n, target):
    m = zeros(n, n)
    for i in range(n):
        m[i, target(i)] = True
    return m


def mat_structural(kind: str, *dims: int):
    """Matrices of the structural morphisms on objects of the given sizes.

    ``Braid``/``SumBraid`` take two sizes and ``Distribute`` three; the rest
    take one.
    """
    if kind == "Copy":
        n, = dims
        m = zeros(n, n * n)
        for i in range(n):
            m[i, i * n + i] = True
        return m
    if kind == "Merge":
        return mat_structural("Copy", *dims).T.copy()
    if kind == "Delete":
        n, = dims
        return np.ones((n, 1), dtype=bool)
    if kind == "Create":
        n, = dims
        return np.ones((1, n), dtype=bool)
    if kind == "CoMerge":
        n, = dims
        return np.vstack([identity(n), identity(n)])
    if kind == "CoCopy":
        return mat_structural("CoMerge", *dims).T.copy()
    if kind == "CoCreate":
        n, = dims
        return zeros(0, n)
    if kind == "CoDelete":
        n, = dims
        return zeros(n, 0)
    if kind == "Braid":
        n, m = dims
        return _perm(n * m, lambda k: (k % m) * n + k // m)
    if kind == "SumBraid":
        n, m = dims
        return _perm(n + m, lambda k: m + k if k < n else k - n)
    if kind == "Distribute":
        n, p, q = dims

        def target(k):
            i, r = divmod(k, p + q)
            return i * p + r if r < p else n * p + i * q + (r - p)
        return _perm(n * (p + q), target)
    raise ValueError(f"unknown structural kind {kind!r}")


def dim(obj, dims) -> int:
    if isinstance(obj, Ob):
        return dims[obj.name]
    if isinstance(obj, UnitI):
        return 1
    if isinstance(obj, ZeroO):
        return 0
    if isinstance(obj, ObTensor):
        n = 1
        for f in obj.factors:
            n *= dim(f, dims)
        return n
    if isinstance(obj, ObSum):
        return sum(dim(s, dims) for s in obj.summands)
    raise TypeError(obj)


@dataclass(frozen=True)
class MatrixInstance:
    dims: dict
    matrices: dict


def eval_matrix(expr, minst: MatrixInstance, pres: OlogPresentation) -> np.ndarray:
    memo = {}

    def go(e):
        if e in memo:
            return memo[e]
        out = _eval(e)
        memo[e] = out
        return out

    def d(obj):
        return dim(normalize_object(obj), minst.dims)

    def _eval(e):
        if isinstance(e, Gen):
            if e.name not in minst.matrices:
                pres.signature(e.name)
                raise UnboundGenerator(e.name)
            return minst.matrices[e.name]
        if isinstance(e, Compose):
            m = go(e.parts[0])
            for p in e.parts[1:]:
                m = mat_compose(m, go(p))
            return m
        if isinstance(e, Tensor):
            m = np.ones((1, 1), dtype=bool)
            for p in e.parts:
                m = mat_kron(m, go(p))
            return m
        if isinstance(e, SumTensor):
            m = zeros(0, 0)
            for p in e.parts:
                m = mat_dsum(m, go(p))
            return m
        if isinstance(e, Id):
            return identity(d(e.obj))
        if isinstance(e, Braid):
            return mat_structural("Braid", d(e.x), d(e.y))
        if isinstance(e, SumBraid):
            return mat_structural("SumBraid", d(e.x), d(e.y))
        if isinstance(e, Distribute):
            return mat_structural("Distribute", d(e.x), d(e.y), d(e.z))
        if isinstance(e, DistributeInv):
            return mat_structural("Distribute", d(e.x), d(e.y), d(e.z)).T.copy()
        if isinstance(e, (Copy, Merge, Delete, Create, CoMerge, CoCopy, CoCreate, CoDelete)):
            return mat_structural(type(e).__name__, d(e.x))
        if isinstance(e, Unit):
            n = d(e.x)
            return mat_compose(np.ones((1, n), dtype=bool), mat_structural("Copy", n))
        if isinstance(e, Counit):
            n = d(e.x)
            return mat_compose(mat_structural("Merge", n), np.ones((n, 1), dtype=bool))
        if isinstance(e, Top):
            _check_size(d(e.dom), d(e.cod))
            return np.ones((d(e.dom), d(e.cod)), dtype=bool)
        if isinstance(e, Bottom):
            return zeros(d(e.dom), d(e.cod))
        if isinstance(e, Dagger):
            return go(e.inner).T.copy()
        if isinstance(e, Meet):
            return go(e.left) & go(e.right)
        if isinstance(e, Join):
            return go(e.left) | go(e.right)
        raise OlogError(f"cannot evaluate {e!r}")

    infer_type(expr, pres)
    return go(expr)


def relation_matrix(rel, carriers) -> np.ndarray:
    """Matrix of a finite relation under the canonical element order."""
    xs = carrier(rel.dom, carriers)
    ys = carrier(rel.cod, carriers)
    ix = {x: i for i, x in enumerate(xs)}
    iy = {y: j for j, y in enumerate(ys)}
    m = zeros(len(xs), len(ys))
    for x, y in rel.pairs:
        m[ix[x], iy[y]] = True
    return m


def bridge(inst: Instance) -> MatrixInstance:
    dims = {t: len(c) for t, c in inst.carriers.items()}
    mats = {name: relation_matrix(rel, inst.carriers) for name, rel in inst.relations.items()}
    return MatrixInstance(dims, mats)


def format_matrix(m) -> str:
    return "\n".join(" ".join("1" if v else "0" for v in row) for row in m)


def parse_matrix(text: str) -> np.ndarray:
    rows = [[c == "1" for c in line.split()] for line in text.strip().splitlines() if line.strip()]
    return np.array(rows, dtype=bool)
