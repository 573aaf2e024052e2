"""Bounded enumeration of finite models and countermodel search.

Carriers range from ``min_carrier`` (one by default) up to the bound.
Models come out in a fixed order: carrier-size vectors by total size and then
lexicographically (types in declaration order), and within one size vector the
relations' bitmasks in declaration order, each mask ascending.  Bit ``n-1-i``
of a mask stands for the ``i``-th pair of the generator's canonical pair list,
so masks read as big-endian integers.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from .core import OlogError, OlogPresentation, SignatureMismatch, generators_of, infer_type
from .finrel import FinRelation, Instance, _Evaluator, _canonical_first, carrier

MAX_PAIRS = 20


class BudgetExceeded(OlogError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_carrier: object = 2            # int, or a mapping type -> int
    max_models: int | None = None
    timeout: float | None = None       # seconds
    min_carrier: int = 1               # empty carriers are skipped by default

    def __post_init__(self):
        bounds = self.max_carrier.values() if isinstance(self.max_carrier, dict) \
            else [self.max_carrier]
        if self.min_carrier < 0 or any(b < 0 for b in bounds):
            raise ValueError("carrier bounds must be non-negative")

    def bound(self, type_name) -> int:
        if isinstance(self.max_carrier, dict):
            return self.max_carrier.get(type_name, 0)
        return self.max_carrier


@dataclass(frozen=True)
class Truncated:
    """End-of-stream marker: the enumeration stopped before exhausting the budget."""
    reason: str


@dataclass
class SearchResult:
    countermodel: Instance | None
    models_checked: int
    truncated: Truncated | None = None
    witness: tuple | None = None

    @property
    def found(self):
        return self.countermodel is not None


def element_names(type_name: str, n: int) -> tuple:
    return tuple(f"{type_name}{i + 1}" for i in range(n))


def size_vectors(pres: OlogPresentation, budget: SearchBudget) -> list:
    ranges = [range(min(budget.min_carrier, budget.bound(t)), budget.bound(t) + 1) for t in pres.type_generators]
    return sorted(itertools.product(*ranges), key=lambda v: (sum(v), v))


def _mask_pairs(mask, pairs):
    n = len(pairs)
    return frozenset(p for i, p in enumerate(pairs) if mask >> (n - 1 - i) & 1)


def _holds(axiom, relations, carriers, pres):
    ev = _Evaluator(Instance(carriers, relations), pres)
    return ev.pairs(axiom.lhs) <= ev.pairs(axiom.rhs)


class _Enumerator:
    def __init__(self, pres, budget):
        self.pres = pres
        self.budget = budget
        self.gens = list(pres.relation_generators)
        pos = {g: i for i, g in enumerate(self.gens)}
        # each axiom is checked as soon as its last generator has a value
        self.level = {}
        for ax in pres.axioms:
            used = generators_of(ax.lhs) | generators_of(ax.rhs)
            self.level.setdefault(max((pos[g] for g in used), default=-1), []).append(
                (ax, used))

    def models(self):
        start = time.monotonic()
        yielded = 0
        for sizes in size_vectors(self.pres, self.budget):
            carriers = {t: element_names(t, n) for t, n in zip(self.pres.type_generators, sizes)}
            if not all(_holds(ax, {}, carriers, self.pres) for ax, _ in self.level.get(-1, ())):
                continue
            pair_lists = {}
            for g, (dom, cod) in self.pres.relation_generators.items():
                pair_lists[g] = list(itertools.product(carrier(dom, carriers), carrier(cod, carriers)))
                if len(pair_lists[g]) > MAX_PAIRS:
                    yield Truncated(f"generator {g!r} has {len(pair_lists[g])} candidate pairs "
                                    f"at carrier sizes {sizes}")
                    return
            candidates = [self._candidates(i, g, pair_lists[g], carriers)
                          for i, g in enumerate(self.gens)]
            for rels in self._search(0, {}, candidates, carriers):
                if self.budget.timeout is not None and time.monotonic() - start > self.budget.timeout:
                    yield Truncated("timeout")
                    return
                if self.budget.max_models is not None and yielded >= self.budget.max_models:
                    yield Truncated("max_models")
                    return
                yield Instance(carriers, {g: FinRelation(*self.pres.relation_generators[g], rels[g])
                                          for g in self.gens})
                yielded += 1

    def _candidates(self, i, g, pairs, carriers):
        """Relations for ``g`` in mask order, filtered by axioms mentioning only ``g``."""
        local = [ax for ax, used in self.level.get(i, ()) if used == {g}]
        out = []
        for mask in range(1 << len(pairs)):
            rel = _mask_pairs(mask, pairs)
            if all(_holds(ax, {g: FinRelation(*self.pres.relation_generators[g], rel)},
                          carriers, self.pres) for ax in local):
                out.append(rel)
        return out

    def _search(self, i, rels, candidates, carriers):
        if i == len(self.gens):
            yield dict(rels)
            return
        g = self.gens[i]
        checks = [ax for ax, used in self.level.get(i, ()) if used != {g}]
        for rel in candidates[i]:
            rels[g] = rel
            if checks:
                frozen = {h: FinRelation(*self.pres.relation_generators[h], rels[h]) for h in rels}
                if not all(_holds(ax, frozen, carriers, self.pres) for ax in checks):
                    continue
            yield from self._search(i + 1, rels, candidates, carriers)
        rels.pop(g, None)


def enumerate_models(pres: OlogPresentation, budget: SearchBudget):
    """Every model within the budget, in the canonical order.

    If the stream stops early the last item is a :class:`Truncated` marker.
    """
    return _Enumerator(pres, budget).models()


def search(pres: OlogPresentation, lhs, rhs, budget: SearchBudget) -> SearchResult:
    """Look for a model in which ``lhs => rhs`` fails."""
    lt, rt = infer_type(lhs, pres), infer_type(rhs, pres)
    if lt != rt:
        raise SignatureMismatch(lt, rt)
    checked = 0
    for item in enumerate_models(pres, budget):
        if isinstance(item, Truncated):
            return SearchResult(None, checked, item)
        checked += 1
        ev = _Evaluator(item, pres)
        extra = ev.pairs(lhs) - ev.pairs(rhs)
        if extra:
            return SearchResult(item, checked, None,
                                _canonical_first(extra, lt[0], lt[1], item.carriers))
    return SearchResult(None, checked)


def find_countermodel(pres: OlogPresentation, lhs, rhs, budget: SearchBudget) -> Instance | None:
    """First enumerated model where ``lhs => rhs`` fails, or None within the budget.

    None means only that no countermodel exists up to the bound.
    """
    return search(pres, lhs, rhs, budget).countermodel


__all__ = [
    "BudgetExceeded", "SearchBudget", "Truncated", "SearchResult", "enumerate_models",
    "search", "find_countermodel", "size_vectors", "element_names", "MAX_PAIRS",
]
