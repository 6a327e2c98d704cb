"""Brute-force baselines, kept independent of the solver's shortcuts.

``exhaustive_solve`` enumerates region sets over *all* nonempty labels and,
per region set, every admissible target map, re-checking each candidate
with local copies of the fulfillment, accessibility and ordering
definitions.  The one reduction it applies: nodes outside every product
``F(y) ⊗ F(z)`` get no targets (``unreduced=True`` switches that off for
cross-checking on tiny inputs).
"""
from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from itertools import chain, combinations, permutations, product
from math import comb, prod
from typing import Iterable

from .formula import DiffLit, NeqLit, NormConjunction, UnionLit, UProdLit
from .hfset import EMPTY, HFSet, powast12
from .partition import Partition, evaluate

__all__ = [
    "OracleBlowup",
    "CorpusSpec",
    "exhaustive_solve",
    "sample_models",
    "random_hfset",
    "brute_otimes_blocks",
    "literal_space",
    "structural_corpus",
    "random_corpus",
    "write_results_csv",
]


class OracleBlowup(RuntimeError):
    """The enumeration space exceeds the configured ceiling."""


def _subsets(items, nonempty=False):
    items = list(items)
    start = 1 if nonempty else 0
    return chain.from_iterable(combinations(items, k) for k in range(start, len(items) + 1))


def _nodes(k: int) -> list:
    return [frozenset((i,)) for i in range(k)] + [frozenset(p) for p in combinations(range(k), 2)]


def _accessible(k: int, T: dict) -> bool:
    hit = set()
    for t in T.values():
        hit |= t
    reached = set(range(k)) - hit
    while True:
        grow = set()
        for node, t in T.items():
            if node <= reached:
                grow |= t - reached
        if not grow:
            return len(reached) == k
        reached |= grow


def _has_order(k: int, T: dict) -> bool:
    live = [(n, t) for n, t in T.items() if t]
    for perm in permutations(range(k)):
        pos = {p: i for i, p in enumerate(perm)}
        if all(max(pos[p] for p in n) < max(pos[q] for q in t) for n, t in live):
            return True
    return False


def _fulfills(F: dict, T: dict, c: NormConjunction) -> bool:
    for lit in c:
        if isinstance(lit, UnionLit):
            ok = F[lit.x] == F[lit.y] | F[lit.z]
        elif isinstance(lit, DiffLit):
            ok = F[lit.x] == F[lit.y] - F[lit.z]
        elif isinstance(lit, NeqLit):
            ok = F[lit.x] != F[lit.y]
        else:
            inside = {frozenset((u, v)) for u in F[lit.y] for v in F[lit.z]}
            fx = F[lit.x]
            ok = all(T[n] and T[n] <= fx for n in inside)
            ok = ok and fx <= set().union(*[T[n] for n in inside])
            ok = ok and all(not (T[n] & fx) for n in T if n not in inside)
        if not ok:
            return False
    return True


def exhaustive_solve(
    c: NormConjunction,
    max_places: int | None = None,
    mode: str = "ordinary",
    ceiling: int = 2_000_000,
    unreduced: bool = False,
):
    """``"SAT"`` or ``"UNSAT"`` by naive enumeration.

    Raises :class:`OracleBlowup` if there are more than ``ceiling`` region
    sets, or one region set has more than ``ceiling`` candidate target maps.
    """
    finite = mode == "finite"
    vs = sorted(c.vars)
    labels = [frozenset(s) for s in _subsets(vs, nonempty=True)]
    top = len(labels) if max_places is None else min(max_places, len(labels))
    n_sets = sum(comb(len(labels), k) for k in range(top + 1))
    if n_sets > ceiling:
        raise OracleBlowup(f"{n_sets} region sets exceeds {ceiling}")
    prods = [l for l in c if isinstance(l, UProdLit)]
    bool_part = NormConjunction([l for l in c if not isinstance(l, UProdLit)])
    for k in range(top + 1):
        for regions in combinations(labels, k):
            F = {v: frozenset(i for i, r in enumerate(regions) if v in r) for v in vs}
            if not _fulfills(F, {}, bool_part):
                continue
            nodes = _nodes(k)
            insides = [{frozenset((u, v)) for u in F[l.y] for v in F[l.z]} for l in prods]
            choices = []
            for n in nodes:
                hit = [l for l, ins in zip(prods, insides) if n in ins]
                if not hit and not unreduced:
                    choices.append([frozenset()])
                    continue
                opts = []
                for t in _subsets(range(k), nonempty=bool(hit)):
                    t = frozenset(t)
                    if all(t <= F[l.x] for l in hit) and not any(
                        t & F[l.x] for l, ins in zip(prods, insides) if n not in ins
                    ):
                        opts.append(t)
                choices.append(opts)
            size = prod(len(o) for o in choices)
            if size > ceiling:
                raise OracleBlowup(f"{size} target maps for {k} places exceeds {ceiling}")
            for pick in product(*choices):
                T = dict(zip(nodes, pick))
                if not _fulfills(F, T, c):
                    continue
                if not _accessible(k, T):
                    continue
                if finite and not _has_order(k, T):
                    continue
                return "SAT"
    return "UNSAT"


# --------------------------------------------------------------------------
# sampling


def random_hfset(rng: random.Random, max_rank: int, max_width: int) -> HFSet:
    if max_rank <= 0:
        return EMPTY
    width = rng.randint(0, max_width)
    return HFSet(random_hfset(rng, rng.randint(0, max_rank - 1), max_width) for _ in range(width))


def sample_models(phi, trials: int = 1000, max_rank: int = 2, max_width: int = 2, seed=0):
    """Random assignments; the first one satisfying ``phi`` or ``None``."""
    from .formula import parse, vars_of

    if isinstance(phi, str):
        phi = parse(phi)
    rng = random.Random(seed)
    names = sorted(vars_of(phi))
    for _ in range(trials):
        M = {v: random_hfset(rng, max_rank, max_width) for v in names}
        if evaluate(M, phi):
            return M
    return None


# --------------------------------------------------------------------------
# ⊗-blocks by definition


def brute_otimes_blocks(p: Partition, ceiling: int = 1 << 16):
    """Largest block set equal to a union of pair-products, by enumeration."""
    n = len(p)
    pairs = [frozenset((i,)) for i in range(n)] + [frozenset(q) for q in combinations(range(n), 2)]
    if 2 ** len(pairs) > ceiling:
        raise OracleBlowup(f"{2 ** len(pairs)} candidate upblock sets")
    valid = []
    for B in _subsets(pairs):
        union: set = set()
        for node in B:
            union |= powast12([p.blocks[i] for i in node]).members
        sigma = []
        covered: set = set()
        for i, b in enumerate(p.blocks):
            if b.members & union:
                sigma.append(i)
                covered |= b.members
        if covered == union:
            valid.append((frozenset(sigma), frozenset(B)))
    tops = {s for s, _ in valid if not any(s < t for t, _ in valid)}
    if len(tops) != 1:
        raise AssertionError(f"no unique maximal ⊗-subpartition: {sorted(map(sorted, tops))}")
    top = tops.pop()
    witnesses = {B for s, B in valid if s == top}
    if len(witnesses) != 1:
        raise AssertionError("maximal ⊗-subpartition has several upblock sets")
    return top, witnesses.pop()


# --------------------------------------------------------------------------
# corpora


@dataclass(frozen=True)
class CorpusSpec:
    max_vars: int = 2
    max_literals: int = 3
    seed: int = 0
    count: int = 0

    def __post_init__(self):
        if self.max_vars < 1 or self.max_literals < 1:
            raise ValueError("corpus bounds must be positive")


def literal_space(variables: Iterable[str]) -> list:
    """Every canonical literal over ``variables``."""
    vs = sorted(variables)
    out = []
    for x in vs:
        for y, z in combinations(vs, 2):
            out += [UnionLit(x, y, z), UProdLit(x, y, z)]
        for y in vs:
            out += [UnionLit(x, y, y), UProdLit(x, y, y)]
        for y in vs:
            for z in vs:
                out.append(DiffLit(x, y, z))
    for x, y in combinations(vs, 2):
        out.append(NeqLit(x, y))
    for x in vs:
        out.append(NeqLit(x, x))
    return out


def structural_corpus(spec: CorpusSpec = CorpusSpec()) -> list:
    """All conjunctions of at most ``max_literals`` distinct literals over the
    first ``max_vars`` of ``x, y, z, ...``."""
    names = ["x", "y", "z", "u", "w"][: spec.max_vars]
    lits = literal_space(names)
    out = []
    for k in range(0, spec.max_literals + 1):
        for combo in combinations(lits, k):
            out.append(NormConjunction(combo))
    return out


def random_corpus(spec: CorpusSpec, accept=None) -> list:
    """``spec.count`` distinct seeded conjunctions mentioning exactly
    ``max_vars`` variables; ``accept`` may veto candidates."""
    names = ["x", "y", "z", "u", "w"][: spec.max_vars]
    lits = literal_space(names)
    rng = random.Random(spec.seed)
    seen = set()
    out = []
    attempts = 0
    while len(out) < spec.count:
        attempts += 1
        if attempts > 1000 * max(spec.count, 1):
            raise RuntimeError("random corpus generation is not making progress")
        k = rng.randint(1, spec.max_literals)
        c = NormConjunction(rng.sample(lits, k))
        if c.vars != frozenset(names) or c.literals in seen:
            continue
        if accept is not None and not accept(c):
            continue
        seen.add(c.literals)
        out.append(c)
    return out


def write_results_csv(path, rows: Iterable[dict]) -> None:
    fields = ["formula", "verdict_solver", "verdict_oracle", "mode", "time_ms"]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
        w.writeheader()
        for row in rows:
            w.writerow(row)
