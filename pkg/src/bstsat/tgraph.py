"""⊗-graphs: places, nodes (1-/2-element place sets) and a target map.

Membership edges are implicit (a place belongs to every node containing it);
only the target map is stored.  Nodes are frozensets of place ids and the
target map is total over all nodes, with empty target sets for nodes that
distribute nothing.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Place",
    "TGraph",
    "node_key",
    "parse_node_key",
    "source_places",
    "accessible_places",
    "is_accessible",
    "is_otimes_order",
    "find_otimes_order",
    "brute_force_otimes_order",
]

Node = frozenset


@dataclass(frozen=True)
class Place:
    id: int
    label: frozenset | None = None


def node_key(node: Iterable[int]) -> str:
    return ",".join(str(i) for i in sorted(node))


def parse_node_key(key: str) -> frozenset:
    return frozenset(int(part) for part in key.split(","))


def _sort_node(node) -> tuple:
    return tuple(sorted(node))


class TGraph:
    """A ⊗-graph given by its places and (partial) target map.

    ``targets`` may omit nodes; omitted nodes get no targets.  Keys may be any
    iterable of one or two place ids.
    """

    def __init__(self, places: Sequence[Place | int], targets: Mapping | None = None):
        ps = [p if isinstance(p, Place) else Place(p) for p in places]
        ids = [p.id for p in ps]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate place ids")
        labels = [p.label for p in ps if p.label is not None]
        if len(set(labels)) != len(labels):
            raise ValueError("place labels must be unique")
        self.places = tuple(sorted(ps, key=lambda p: p.id))
        self.place_ids = tuple(p.id for p in self.places)
        idset = frozenset(self.place_ids)
        self.nodes = tuple(
            [frozenset((i,)) for i in self.place_ids]
            + [frozenset(pair) for pair in combinations(self.place_ids, 2)]
        )
        tmap = {n: frozenset() for n in self.nodes}
        for key, tgt in (targets or {}).items():
            node = parse_node_key(key) if isinstance(key, str) else frozenset(key)
            if node not in tmap:
                raise ValueError(f"not a node over the places: {sorted(node)}")
            tgt = frozenset(tgt)
            if not tgt <= idset:
                raise ValueError(f"unknown target places {sorted(tgt - idset)}")
            tmap[node] = tgt
        self.targets: dict = tmap

    def __repr__(self):
        edges = {node_key(n): sorted(t) for n, t in self.targets.items() if t}
        return f"TGraph(places={list(self.place_ids)}, targets={edges})"

    def __eq__(self, other):
        if not isinstance(other, TGraph):
            return NotImplemented
        return self.places == other.places and self.targets == other.targets

    @property
    def size(self) -> int:
        return len(self.places)

    def label(self, place_id: int):
        return self.places[self.place_ids.index(place_id)].label

    @property
    def otimes_nodes(self) -> tuple:
        return tuple(n for n in self.nodes if self.targets[n])

    @property
    def otimes_places(self) -> frozenset:
        out = set()
        for t in self.targets.values():
            out |= t
        return frozenset(out)

    def preimage(self, place_id: int) -> list:
        return [n for n in self.nodes if place_id in self.targets[n]]

    def to_json(self) -> dict:
        places = []
        for p in self.places:
            entry = {"id": p.id}
            if p.label is not None:
                entry["label"] = sorted(p.label)
            places.append(entry)
        return {
            "places": places,
            "targets": {node_key(n): sorted(self.targets[n]) for n in self.nodes},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> TGraph:
        places = [
            Place(int(p["id"]), frozenset(p["label"]) if p.get("label") is not None else None)
            for p in data["places"]
        ]
        return cls(places, data.get("targets", {}))


def source_places(g: TGraph) -> frozenset:
    return frozenset(g.place_ids) - g.otimes_places


def accessible_places(g: TGraph) -> frozenset:
    """Least fixpoint seeded by the source places."""
    reached = set(source_places(g))
    pending = [n for n in g.otimes_nodes]
    changed = True
    while changed:
        changed = False
        rest = []
        for n in pending:
            if n <= reached:
                new = g.targets[n] - reached
                if new:
                    reached |= new
                    changed = True
            else:
                rest.append(n)
        pending = rest
    return frozenset(reached)


def is_accessible(g: TGraph) -> bool:
    return len(accessible_places(g)) == g.size


def _check_order(g: TGraph, order: Sequence[int]) -> dict:
    if sorted(order) != sorted(g.place_ids):
        raise ValueError(f"order {list(order)} is not a permutation of the places")
    return {p: i for i, p in enumerate(order)}


def is_otimes_order(g: TGraph, order: Sequence[int]) -> bool:
    """``max A`` strictly precedes ``max T(A)`` for every node with targets."""
    pos = _check_order(g, order)
    for n in g.otimes_nodes:
        if max(pos[p] for p in n) >= max(pos[q] for q in g.targets[n]):
            return False
    return True


def find_otimes_order(g: TGraph) -> tuple | None:
    """A topological ⊗-order, or ``None`` when none exists.

    Built from the top down: the greatest remaining place must not belong to
    any still-unsatisfied ⊗-node, and placing it satisfies every node that
    targets it.  Eligibility never shrinks as nodes get satisfied, so the
    greedy choice fails only when no order exists.
    """
    active = set(g.otimes_nodes)
    remaining = list(g.place_ids)
    top_down = []
    while remaining:
        blocked = set()
        for n in active:
            blocked |= n
        pick = next((p for p in reversed(remaining) if p not in blocked), None)
        if pick is None:
            return None
        remaining.remove(pick)
        top_down.append(pick)
        active = {n for n in active if pick not in g.targets[n]}
    return tuple(reversed(top_down))


def brute_force_otimes_order(g: TGraph) -> tuple | None:
    """Permutation scan; reference for :func:`find_otimes_order` on small graphs."""
    for perm in permutations(g.place_ids):
        if is_otimes_order(g, perm):
            return perm
    return None
