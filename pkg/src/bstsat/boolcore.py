"""Fulfilling maps for the ⊗-free fragment.

A Boolean fulfilling map sends each variable to a set of region labels,
where a label is a nonempty subset of the variables.  Only the set
equations between the label sets matter here; the labels themselves are
used to pick a map in which every variable ``v`` owns exactly the labels
containing ``v``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Mapping

from .formula import DiffLit, NeqLit, NormConjunction, UnionLit

__all__ = ["check_bool_fulfills", "solve_bool", "label_pool_map", "all_labels"]


def _require_bool(c: NormConjunction):
    if c.has_uprod:
        raise ValueError("conjunction contains a >< literal")


def check_bool_fulfills(F: Mapping, c: NormConjunction) -> bool:
    _require_bool(c)
    get = lambda v: frozenset(F.get(v, ()))  # noqa: E731
    for lit in c:
        if isinstance(lit, UnionLit):
            if get(lit.x) != get(lit.y) | get(lit.z):
                return False
        elif isinstance(lit, DiffLit):
            if get(lit.x) != get(lit.y) - get(lit.z):
                return False
        elif isinstance(lit, NeqLit):
            if get(lit.x) == get(lit.y):
                return False
    return True


def all_labels(variables) -> list:
    """Every nonempty subset of ``variables``, smallest first."""
    vs = sorted(variables)
    out = []
    for k in range(1, len(vs) + 1):
        out.extend(frozenset(s) for s in combinations(vs, k))
    return out


def label_pool_map(pool, variables) -> dict:
    return {v: frozenset(L for L in pool if v in L) for v in variables}


def _pointwise_ok(label: frozenset, c: NormConjunction) -> bool:
    # a single label already witnesses every equation it can break
    F = label_pool_map([label], c.vars)
    for lit in c:
        if isinstance(lit, (UnionLit, DiffLit)) and not check_bool_fulfills(
            F, NormConjunction([lit])
        ):
            return False
    return True


def solve_bool(c: NormConjunction) -> dict | None:
    """A fulfilling map using at most ``|V| - 1`` labels, or ``None``.

    Labels that break a ∪/\\ equation on their own can never occur in a
    fulfilling label pool, so they are dropped before the pool search.
    """
    _require_bool(c)
    if any(isinstance(l, NeqLit) and l.x == l.y for l in c):
        return None
    labels = [L for L in all_labels(c.vars) if _pointwise_ok(L, c)]
    bound = max(len(c.vars) - 1, 0)
    for k in range(0, min(bound, len(labels)) + 1):
        for pool in combinations(labels, k):
            F = label_pool_map(pool, c.vars)
            if check_bool_fulfills(F, c):
                return F
    return None
