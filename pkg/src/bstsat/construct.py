"""Turning an accessible ⊗-graph into explicit hereditarily finite blocks.

Initialization fills source places with fresh cardinality-3 sets and then
lets ready nodes spread their pair-sets over their targets.  Stabilization
keeps redistributing pairs that appear as blocks grow: fairly (FIFO) for a
bounded number of rounds, or along a ⊗-order, which terminates.

Blocks are stored as insertion-ordered lists so that each node can remember
how much of its places' blocks it has already distributed; the pairs still
owed by a node are exactly those involving a member it has not seen yet.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import comb

from .hfset import HFSet, zermelo
from .tgraph import TGraph, is_accessible, is_otimes_order, node_key

__all__ = [
    "ConstructionError",
    "BlockState",
    "source_element",
    "initialize",
    "stabilize_ordered",
    "stabilize_fair",
    "ripe_nodes",
    "build_state",
    "model_of",
    "build_model",
    "check_property",
]


class ConstructionError(RuntimeError):
    pass


def source_element(k: int) -> HFSet:
    """``{s0, s1, s_{k+3}}`` with ``s_m`` the m-th Zermelo numeral."""
    return HFSet((zermelo(0), zermelo(1), zermelo(k + 3)))


@dataclass
class TraceEvent:
    phase: str
    round: int
    node: str
    moved: int
    targets: tuple

    def __str__(self):
        return f"{self.phase} round={self.round} node={{{self.node}}} moved={self.moved} targets={list(self.targets)}"


@dataclass
class BlockState:
    graph: TGraph
    lists: dict = field(default_factory=dict)  # place -> list[HFSet]
    owner: dict = field(default_factory=dict)  # element -> place
    seen: dict = field(default_factory=dict)  # node -> tuple of consumed lengths
    trace: list = field(default_factory=list)
    explicit_rounds: int = 0
    symbolic_rounds: int = 0
    record: bool = True

    def __post_init__(self):
        for p in self.graph.place_ids:
            self.lists.setdefault(p, [])

    def block(self, p) -> HFSet:
        return HFSet(self.lists[p])

    @property
    def blocks(self) -> dict:
        return {p: self.block(p) for p in self.graph.place_ids}

    def size(self, p) -> int:
        return len(self.lists[p])

    def total(self) -> int:
        return sum(len(v) for v in self.lists.values())

    def add(self, p, e: HFSet):
        if e in self.owner:
            raise ConstructionError(f"element {e} already placed in {self.owner[e]}")
        self.owner[e] = p
        self.lists[p].append(e)

    # -- products ---------------------------------------------------------

    def pending_count(self, node) -> int:
        ps = sorted(node)
        old = self.seen.get(node, (0,) * len(ps))
        new = tuple(len(self.lists[p]) for p in ps)
        if len(ps) == 1:
            return (new[0] + comb(new[0], 2)) - (old[0] + comb(old[0], 2))
        return new[0] * new[1] - old[0] * old[1]

    def take_pending(self, node) -> list:
        """The new members of the node's product since its last distribution."""
        ps = sorted(node)
        old = self.seen.get(node, (0,) * len(ps))
        new = tuple(len(self.lists[p]) for p in ps)
        self.seen[node] = new
        out = []
        if len(ps) == 1:
            xs = self.lists[ps[0]]
            a0, a1 = old[0], new[0]
            for j in range(a0, a1):
                out.append(HFSet((xs[j],)))
                for i in range(j):
                    out.append(HFSet((xs[i], xs[j])))
        else:
            xs, ys = self.lists[ps[0]], self.lists[ps[1]]
            (a0, b0), (a1, b1) = old, new
            for i in range(a1):
                lo = b0 if i < a0 else 0
                for j in range(lo, b1):
                    out.append(HFSet((xs[i], ys[j])))
        return out

    def distribute(self, node, targets, phase: str, rnd: int) -> int:
        """Round-robin the node's pending pairs over ``targets``."""
        items = self.take_pending(node)
        targets = list(targets)
        for k, e in enumerate(items):
            self.add(targets[k % len(targets)], e)
        if self.record:
            self.trace.append(TraceEvent(phase, rnd, node_key(node), len(items), tuple(targets)))
        return len(items)


# --------------------------------------------------------------------------
# initialization


def initialize(g: TGraph, record: bool = True) -> BlockState:
    if not is_accessible(g):
        raise ConstructionError("graph is not accessible; initialization would not terminate")
    st = BlockState(g, record=record)
    otimes_places = g.otimes_places
    m = max(2 * len(otimes_places), 1)
    k = 0
    for p in g.place_ids:
        if p in otimes_places:
            continue
        for _ in range(m):
            st.add(p, source_element(k))
            k += 1
    done = set()
    rnd = 0
    while any(not st.lists[q] for q in otimes_places):
        ready = [
            n
            for n in g.otimes_nodes
            if n not in done
            and all(st.lists[p] for p in n)
            and any(not st.lists[q] for q in g.targets[n])
        ]
        if not ready:  # pragma: no cover - excluded by accessibility
            raise ConstructionError("no ready node during initialization")
        node = min(ready, key=lambda n: tuple(sorted(n)))
        done.add(node)
        st.distribute(node, sorted(g.targets[node]), "init", rnd)
        rnd += 1
    return st


def ripe_nodes(st: BlockState) -> list:
    return [n for n in st.graph.otimes_nodes if st.pending_count(n) > 0]


# --------------------------------------------------------------------------
# stabilization


def stabilize_ordered(g: TGraph, order, st: BlockState, snapshot=None) -> BlockState:
    """Distribute ripe nodes in ⪯-order, each into its ≺-greatest target.

    ``snapshot`` (optional) is called with the state after every step.
    """
    if not is_otimes_order(g, order):
        raise ConstructionError("not a topological ⊗-order for this graph")
    pos = {p: i for i, p in enumerate(order)}
    bound = len(g.otimes_nodes)
    it = 0
    while True:
        ripe = ripe_nodes(st)
        if not ripe:
            return st
        it += 1
        if it > bound:
            raise ConstructionError(f"ordered stabilization exceeded {bound} iterations")
        node = min(ripe, key=lambda n: (max(pos[p] for p in n), tuple(sorted(n))))
        q = max(g.targets[node], key=lambda p: pos[p])
        st.distribute(node, [q], "ordered", it)
        st.explicit_rounds = it
        if snapshot is not None:
            snapshot(st)


def stabilize_fair(
    g: TGraph,
    st: BlockState,
    max_rounds: int,
    element_budget: int = 200_000,
    snapshot=None,
) -> tuple[BlockState, frozenset]:
    """FIFO stabilization for ``max_rounds`` distribution steps.

    Once the blocks would exceed ``element_budget`` elements the run carries
    on symbolically, tracking only which nodes are ripe.  That is exact: after
    initialization every block holds at least ``2|P⊗|`` elements, so any
    batch a ripe node owes is at least as large as its target set and every
    target grows.  Returns the state and the set of nodes still ripe.
    """
    if max_rounds < 0:
        raise ValueError("max_rounds must be nonnegative")
    queue = deque(ripe_nodes(st))
    queued = set(queue)
    containing = {p: [n for n in g.otimes_nodes if p in n] for p in g.place_ids}
    symbolic = False
    ripe_flag: set = set()
    for rnd in range(1, max_rounds + 1):
        if not queue:
            break
        node = queue.popleft()
        queued.discard(node)
        targets = sorted(g.targets[node])
        if not symbolic and st.total() + st.pending_count(node) > element_budget:
            symbolic = True
            ripe_flag = set(ripe_nodes(st))
        if symbolic:
            ripe_flag.discard(node)
            grown = targets
            st.symbolic_rounds += 1
        else:
            moved = st.distribute(node, targets, "fair", rnd)
            grown = targets[:moved]
            st.explicit_rounds += 1
            if snapshot is not None:
                snapshot(st)
        for q in grown:
            for n in containing[q]:
                if symbolic:
                    ripe_flag.add(n)
                if n not in queued:
                    queue.append(n)
                    queued.add(n)
    if symbolic:
        residual = frozenset(n for n in g.otimes_nodes if n in ripe_flag)
    else:
        residual = frozenset(ripe_nodes(st))
    return st, residual


# --------------------------------------------------------------------------
# models and invariants


def build_state(cert, record: bool = False) -> BlockState:
    """Initialize and order-stabilize the certificate's graph."""
    if cert.order is None:
        raise ConstructionError("certificate has no ⊗-order; no finite model to build")
    st = initialize(cert.graph, record=record)
    return stabilize_ordered(cert.graph, cert.order, st)


def model_of(cert, st: BlockState) -> dict:
    model = {}
    for v in sorted(cert.conj.vars):
        members = []
        for p in cert.fmap.get(v, ()):
            members.extend(st.lists[p])
        model[v] = HFSet(members)
    return model


def build_model(cert, record: bool = False) -> dict:
    """Explicit model from a certificate carrying a ⊗-order."""
    return model_of(cert, build_state(cert, record))


def _node_of(st: BlockState, e: HFSet):
    places = set()
    for u in e:
        p = st.owner.get(u)
        if p is None:
            return None
        places.add(p)
    return frozenset(places)


def check_property(st: BlockState, g: TGraph, which: str) -> bool:
    which = which.upper()
    if which == "P1":
        seen = set()
        for p in g.place_ids:
            b = set(st.lists[p])
            if len(b) != len(st.lists[p]) or seen & b:
                return False
            seen |= b
        return True
    if which == "P2":
        return check_property(st, g, "P1") and all(st.lists[p] for p in g.place_ids)
    if which == "P3":
        for q in g.otimes_places:
            for e in st.lists[q]:
                if not 1 <= len(e) <= 2:
                    return False
                node = _node_of(st, e)
                if node is None or q not in g.targets[node]:
                    return False
        return True
    if which == "P4":
        counts: dict = {}
        for q in g.otimes_places:
            for e in st.lists[q]:
                node = _node_of(st, e)
                if node is not None and q in g.targets[node]:
                    counts[node] = counts.get(node, 0) + 1
        for node in g.otimes_nodes:
            ps = sorted(node)
            if len(ps) == 1:
                a = len(st.lists[ps[0]])
                want = a + comb(a, 2)
            else:
                want = len(st.lists[ps[0]]) * len(st.lists[ps[1]])
            if counts.get(node, 0) != want:
                return False
        return True
    raise ValueError(f"unknown property {which!r}")
