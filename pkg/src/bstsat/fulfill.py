"""Fulfillment of normalized conjunctions by ⊗-graphs, and the solvers.

The solver identifies places with Venn-region labels.  For a region set
``R`` the fulfilling map is fixed (``F(x)`` = regions whose label contains
``x``) and so is the target map: a node lying in some ``F(y) ⊗ F(z)`` gets
every place it may legally target, any other node gets none.  Adding targets
of that kind never hurts coverage, accessibility or ⊗-order existence (the
extra targets are ⊗-places in every solution), so one graph per region set
decides it.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

from . import formula as fm
from .formula import DiffLit, NeqLit, NormConjunction, UnionLit, UProdLit
from .tgraph import Place, TGraph, find_otimes_order, is_accessible, is_otimes_order

__all__ = [
    "Mode",
    "ResourceLimit",
    "Certificate",
    "Verdict",
    "SolveStats",
    "node_product_set",
    "check_fulfills",
    "label_consistent",
    "consistent_labels",
    "region_graph",
    "solve",
    "decide",
]


class Mode(str, enum.Enum):
    ORDINARY = "ordinary"
    FINITE = "finite"


class ResourceLimit(RuntimeError):
    """The search hit a configured cap before reaching a verdict."""


def node_product_set(A, B) -> set:
    """Nodes ``{u, v}`` with ``u ∈ A`` and ``v ∈ B``."""
    return {frozenset((u, v)) for u in A for v in B}


def check_fulfills(g: TGraph, F: Mapping, c: NormConjunction) -> bool:
    """Conditions (a), (b), (c1)-(c3) for every literal of ``c``."""
    missing = c.vars - set(F)
    if missing:
        raise KeyError(f"fulfilling map lacks variables {sorted(missing)}")
    ids = set(g.place_ids)
    Fs = {v: frozenset(F[v]) for v in F}
    for v, ps in Fs.items():
        if not ps <= ids:
            raise ValueError(f"F({v}) names unknown places {sorted(ps - ids)}")
    for lit in c:
        if isinstance(lit, UnionLit):
            if Fs[lit.x] != Fs[lit.y] | Fs[lit.z]:
                return False
        elif isinstance(lit, DiffLit):
            if Fs[lit.x] != Fs[lit.y] - Fs[lit.z]:
                return False
        elif isinstance(lit, NeqLit):
            if Fs[lit.x] == Fs[lit.y]:
                return False
        else:
            fx = Fs[lit.x]
            inside = node_product_set(Fs[lit.y], Fs[lit.z])
            covered = set()
            for node in inside:
                tgt = g.targets[node]
                if not tgt or not tgt <= fx:  # (c1)
                    return False
                covered |= tgt
            if not fx <= covered:  # (c2)
                return False
            for node in g.nodes:  # (c3)
                if node not in inside and g.targets[node] & fx:
                    return False
    return True


# --------------------------------------------------------------------------
# region labels


def label_consistent(label: frozenset, c: NormConjunction) -> bool:
    """Whether every ∪/\\ literal holds pointwise on one region."""
    return all(_lit_ok(l, label) for l in c if isinstance(l, (UnionLit, DiffLit)))


def _label_key(label) -> tuple:
    return (len(label), tuple(sorted(label)))


def consistent_labels(c: NormConjunction) -> list:
    """All nonempty labels over ``c.vars`` respecting the Boolean literals.

    Built variable by variable so inconsistent partial labels are cut early.
    """
    vs = sorted(c.vars)
    lits = [l for l in c if isinstance(l, (UnionLit, DiffLit))]
    pos = {v: i for i, v in enumerate(vs)}
    # check a literal as soon as its last variable has been decided
    due: dict = {i: [] for i in range(len(vs))}
    for l in lits:
        due[max(pos[l.x], pos[l.y], pos[l.z])].append(l)
    out = []

    def rec(i, chosen):
        if i == len(vs):
            if chosen:
                out.append(frozenset(chosen))
            return
        for take in (False, True):
            if take:
                chosen.append(vs[i])
            label = set(chosen)
            if all(_lit_ok(l, label) for l in due[i]):
                rec(i + 1, chosen)
            if take:
                chosen.pop()

    rec(0, [])
    return sorted(out, key=_label_key)


def _lit_ok(lit, label) -> bool:
    if isinstance(lit, UnionLit):
        return (lit.x in label) == (lit.y in label or lit.z in label)
    return (lit.x in label) == (lit.y in label and lit.z not in label)


def region_graph(regions, c: NormConjunction) -> tuple[TGraph, dict] | None:
    """Canonical graph and fulfilling map for a region set.

    Returns ``None`` when some node inside a product has nowhere to send its
    pairs.  Conditions (b), (c2), accessibility and order are left to the
    caller.
    """
    regions = list(regions)
    places = [Place(i, r) for i, r in enumerate(regions)]
    F = {v: frozenset(i for i, r in enumerate(regions) if v in r) for v in c.vars}
    prods = c.of_kind(UProdLit)
    inside = [node_product_set(F[l.y], F[l.z]) for l in prods]
    targets = {}
    if prods:
        for node in _all_nodes(len(regions)):
            hit = [k for k, nodes in enumerate(inside) if node in nodes]
            if not hit:
                continue
            allowed = set(F[prods[hit[0]].x])
            for k in hit[1:]:
                allowed &= F[prods[k].x]
            for k in range(len(prods)):
                if k not in hit:
                    allowed -= F[prods[k].x]
            if not allowed:
                return None
            targets[node] = allowed
    return TGraph(places, targets), F


def _all_nodes(n: int) -> list:
    return [frozenset((i,)) for i in range(n)] + [frozenset(p) for p in combinations(range(n), 2)]


# --------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    graph: TGraph
    fmap: dict
    conj: NormConjunction
    mode: Mode = Mode.ORDINARY
    order: tuple | None = None

    @property
    def places(self) -> int:
        return self.graph.size

    def validate(self) -> None:
        """Raise ``AssertionError`` unless every certificate invariant holds."""
        assert is_accessible(self.graph), "graph not accessible"
        assert check_fulfills(self.graph, self.fmap, self.conj), "map does not fulfill"
        if self.mode == Mode.FINITE:
            assert self.order is not None, "finite certificate without order"
        if self.order is not None:
            assert is_otimes_order(self.graph, self.order), "order is not a ⊗-order"

    def to_json(self) -> dict:
        data = self.graph.to_json()
        data["order"] = list(self.order) if self.order is not None else None
        data["fulfilling"] = {v: sorted(ps) for v, ps in sorted(self.fmap.items())}
        data["mode"] = Mode(self.mode).value
        data["conjunction"] = self.conj.to_json()
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data: Mapping) -> Certificate:
        order = data.get("order")
        return cls(
            graph=TGraph.from_json(data),
            fmap={v: frozenset(ps) for v, ps in data["fulfilling"].items()},
            conj=NormConjunction.from_json(data["conjunction"]),
            mode=Mode(data.get("mode", "ordinary")),
            order=tuple(order) if order is not None else None,
        )


@dataclass
class SolveStats:
    labels: int = 0
    region_sets: int = 0


def solve(
    c: NormConjunction,
    mode: Mode | str = Mode.ORDINARY,
    max_places: int | None = None,
    max_region_sets: int | None = None,
    stats: SolveStats | None = None,
) -> Certificate | None:
    """Smallest-first search over region sets.

    Returns the first certificate found, ``None`` when the search space is
    exhausted, and raises :class:`ResourceLimit` when a cap cut it short.
    """
    mode = Mode(mode)
    stats = stats if stats is not None else SolveStats()
    if any(isinstance(l, NeqLit) and l.x == l.y for l in c):
        return None
    labels = consistent_labels(c)
    stats.labels = len(labels)
    top = len(labels) if max_places is None else min(max_places, len(labels))
    neqs = c.of_kind(NeqLit)
    prods = c.of_kind(UProdLit)
    for k in range(top + 1):
        for regions in combinations(labels, k):
            stats.region_sets += 1
            if max_region_sets is not None and stats.region_sets > max_region_sets:
                raise ResourceLimit(f"more than {max_region_sets} region sets examined")
            # (b): some region separates the two sides
            if not all(any((l.x in r) != (l.y in r) for r in regions) for l in neqs):
                continue
            built = region_graph(regions, c)
            if built is None:
                continue
            g, F = built
            if not _covers(g, F, prods):
                continue
            if not is_accessible(g):
                continue
            order = find_otimes_order(g)
            if mode == Mode.FINITE and order is None:
                continue
            return Certificate(g, F, c, mode, order)
    if top < len(labels):
        raise ResourceLimit(f"no certificate with at most {top} places")
    return None


def _covers(g: TGraph, F, prods) -> bool:
    for l in prods:
        covered = set()
        for node in node_product_set(F[l.y], F[l.z]):
            covered |= g.targets[node]
        if not F[l.x] <= covered:
            return False
    return True


# --------------------------------------------------------------------------
# formulas


@dataclass
class Verdict:
    status: str  # SAT | UNSAT | UNKNOWN
    mode: Mode
    certificate: Certificate | None = None
    disjunct: list | None = None
    conjunction: NormConjunction | None = None
    region_sets: int = 0
    notes: list = field(default_factory=list)

    @property
    def sat(self) -> bool:
        return self.status == "SAT"


def decide(
    phi,
    mode: Mode | str = Mode.ORDINARY,
    max_places: int | None = None,
    max_region_sets: int | None = None,
) -> Verdict:
    """SAT iff some disjunct of the DNF of ``phi`` normalizes to a solvable
    conjunction; the first such disjunct supplies the certificate."""
    mode = Mode(mode)
    if isinstance(phi, str):
        phi = fm.parse(phi)
    unknown = []
    total = 0
    for conjunct in fm.to_dnf(phi):
        c = fm.normalize(conjunct)
        stats = SolveStats()
        try:
            cert = solve(c, mode, max_places, max_region_sets, stats)
        except ResourceLimit as exc:
            unknown.append(str(exc))
            total += stats.region_sets
            continue
        total += stats.region_sets
        if cert is not None:
            return Verdict("SAT", mode, cert, conjunct, c, total)
    if unknown:
        return Verdict("UNKNOWN", mode, region_sets=total, notes=unknown)
    return Verdict("UNSAT", mode, region_sets=total)
