"""Partitions of hereditarily finite sets and their relation to formulas.

Covers set-assignment semantics (:func:`evaluate`), partition assignments,
Venn partitions, ⊗-blocks / upblocks and the ⊗-graph induced by a partition.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from . import formula as fm
from .hfset import EMPTY, HFSet, otimes
from .tgraph import Place, TGraph

__all__ = [
    "Partition",
    "PartitionAssignment",
    "UnboundVariable",
    "induced_assignment",
    "eval_term",
    "evaluate",
    "venn_partition",
    "block_nodes",
    "node_product",
    "otimes_blocks",
    "induced_graph",
    "satisfies",
]


class UnboundVariable(LookupError):
    pass


@dataclass(frozen=True)
class Partition:
    blocks: tuple

    def __init__(self, blocks=()):
        blocks = tuple(blocks)
        seen: set = set()
        for b in blocks:
            if not isinstance(b, HFSet):
                raise TypeError("partition blocks must be HFSet values")
            if not b:
                raise ValueError("partition blocks must be nonempty")
            if seen & b.members:
                raise ValueError("partition blocks must be pairwise disjoint")
            seen |= b.members
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def canonical(cls, blocks) -> Partition:
        """Partition with blocks sorted in canonical HFSet order."""
        return cls(sorted(set(blocks)))

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def domain(self) -> HFSet:
        out: set = set()
        for b in self.blocks:
            out |= b.members
        return HFSet(out)

    def to_json(self) -> list:
        return [b.encoding for b in self.blocks]


@dataclass(frozen=True)
class PartitionAssignment:
    partition: Partition
    assign: Mapping

    def __init__(self, partition: Partition, assign: Mapping):
        n = len(partition)
        frozen = {}
        for v, idx in assign.items():
            idx = frozenset(idx)
            if any(not (0 <= i < n) for i in idx):
                raise ValueError(f"block index out of range for {v!r}")
            frozen[v] = idx
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "assign", frozen)

    def to_json(self) -> dict:
        return {
            "partition": self.partition.to_json(),
            "assign": {v: sorted(i) for v, i in sorted(self.assign.items())},
        }


def induced_assignment(pa: PartitionAssignment) -> dict:
    out = {}
    for v, idx in pa.assign.items():
        members: set = set()
        for i in idx:
            members |= pa.partition.blocks[i].members
        out[v] = HFSet(members)
    return out


# --------------------------------------------------------------------------
# semantics

_OPS = {
    fm.UNION: HFSet.union,
    fm.INTER: HFSet.intersection,
    fm.DIFF: HFSet.difference,
    fm.UPROD: otimes,
}


def eval_term(M: Mapping, t) -> HFSet:
    if isinstance(t, fm.Var):
        try:
            return M[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    return _OPS[t.op](eval_term(M, t.left), eval_term(M, t.right))


def evaluate(M: Mapping, f) -> bool:
    """Truth value of a formula (or normalized conjunction) under ``M``."""
    if isinstance(f, fm.NormConjunction):
        f = f.to_formula()
        if f is None:
            return True
    if isinstance(f, fm.Atom):
        lhs, rhs = eval_term(M, f.lhs), eval_term(M, f.rhs)
        if f.rel == fm.EQ:
            return lhs == rhs
        if f.rel == fm.NEQ:
            return lhs != rhs
        return lhs.issubset(rhs)
    if isinstance(f, fm.Not):
        return not evaluate(M, f.arg)
    if isinstance(f, fm.And):
        return evaluate(M, f.left) and evaluate(M, f.right)
    if isinstance(f, fm.Or):
        return evaluate(M, f.left) or evaluate(M, f.right)
    if isinstance(f, fm.Implies):
        return (not evaluate(M, f.left)) or evaluate(M, f.right)
    if isinstance(f, fm.Iff):
        return evaluate(M, f.left) == evaluate(M, f.right)
    raise TypeError(f"not a formula: {f!r}")


def satisfies(pa: PartitionAssignment, phi) -> bool:
    return evaluate(induced_assignment(pa), phi)


def venn_partition(M: Mapping) -> tuple[Partition, PartitionAssignment]:
    """Nonempty Venn regions of the values of ``M``.

    Every element of the set domain is classified by the set of variables
    whose value contains it; each class is one block.
    """
    names = sorted(M)
    regions: dict = {}
    for v in names:
        for e in M[v]:
            regions.setdefault(e, set()).add(v)
    grouped: dict = {}
    for e, label in regions.items():
        grouped.setdefault(frozenset(label), []).append(e)
    blocks = sorted((HFSet(es), label) for label, es in grouped.items())
    partition = Partition([b for b, _ in blocks])
    assign = {v: {i for i, (_, label) in enumerate(blocks) if v in label} for v in names}
    return partition, PartitionAssignment(partition, assign)


# --------------------------------------------------------------------------
# ⊗-blocks and induced graphs


def block_nodes(n: int) -> list:
    """All 1- and 2-element sets of block indices ``0..n-1``."""
    return [frozenset((i,)) for i in range(n)] + [frozenset(p) for p in combinations(range(n), 2)]


def node_product(p: Partition, node) -> HFSet:
    """``Pow*_{1,2}`` of the blocks named by ``node``, i.e. their ⊗-product."""
    idx = sorted(node)
    a = p.blocks[idx[0]]
    b = p.blocks[idx[-1]]
    return otimes(a, b)


def otimes_blocks(p: Partition) -> tuple[frozenset, frozenset]:
    """⊆-maximal ⊗-subpartition and its upblocks, as sets of block indices.

    Greatest-fixpoint refinement: start from every node whose product lies
    inside the partition domain and repeatedly drop nodes whose product
    touches a block that the current products do not cover completely.
    Products of distinct nodes are disjoint, so coverage is monotone in the
    node set and the surviving nodes are exactly the upblocks.
    """
    n = len(p)
    where = {}
    for i, b in enumerate(p.blocks):
        for e in b:
            where[e] = i
    touched: dict = {}
    for node in block_nodes(n):
        prod = node_product(p, node)
        hits = set()
        for e in prod:
            i = where.get(e)
            if i is None:
                break
            hits.add(i)
        else:
            touched[node] = (prod, hits)
    live = set(touched)
    while True:
        covered: dict = {}
        for node in live:
            for e in touched[node][0]:
                i = where[e]
                covered[i] = covered.get(i, 0) + 1
        full = {i for i, c in covered.items() if c == len(p.blocks[i])}
        drop = {node for node in live if not touched[node][1] <= full}
        if not drop:
            return frozenset(full), frozenset(live)
        live -= drop


def induced_graph(p: Partition) -> tuple[TGraph, dict]:
    """The ⊗-graph induced by ``p``; place ``i`` stands for block ``i``.

    Returns the graph and the place-to-block-index bijection (the identity).
    """
    sigma, pi = otimes_blocks(p)
    targets = {}
    for node in pi:
        prod = node_product(p, node).members
        targets[node] = {i for i in sigma if p.blocks[i].members & prod}
    g = TGraph([Place(i) for i in range(len(p))], targets)
    return g, {i: i for i in range(len(p))}
