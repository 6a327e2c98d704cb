"""Hereditarily finite sets with a canonical string encoding.

An :class:`HFSet` is immutable.  Its canonical encoding is the nested bracket
form used in fixtures (``[]``, ``[[]]``, ``[[],[[]]]``) with members sorted in
shortlex order of their own encodings, so equality is a single string
comparison and every collection of HFSets has a stable total order.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

__all__ = [
    "HFSet",
    "EMPTY",
    "hf",
    "parse",
    "encode",
    "rank",
    "bool_op",
    "otimes",
    "pow12",
    "powast12",
    "zermelo",
]


def _key(s: HFSet) -> tuple[int, str]:
    return (len(s._enc), s._enc)


class HFSet:
    __slots__ = ("_members", "_ordered", "_enc", "_rank")

    def __init__(self, elements: Iterable[HFSet] = ()):
        members = frozenset(elements)
        for e in members:
            if not isinstance(e, HFSet):
                raise TypeError(f"HFSet members must be HFSet, got {type(e).__name__}")
        ordered = tuple(sorted(members, key=_key))
        self._members = members
        self._ordered = ordered
        self._enc = "[" + ",".join(e._enc for e in ordered) + "]"
        self._rank = None

    # container protocol, canonical order
    def __iter__(self) -> Iterator[HFSet]:
        return iter(self._ordered)

    def __len__(self) -> int:
        return len(self._ordered)

    def __contains__(self, item) -> bool:
        return item in self._members

    def __bool__(self) -> bool:
        return bool(self._ordered)

    def __eq__(self, other) -> bool:
        if isinstance(other, HFSet):
            return self._enc == other._enc
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._enc)

    def __lt__(self, other: HFSet) -> bool:
        return _key(self) < _key(other)

    def __le__(self, other: HFSet) -> bool:
        return _key(self) <= _key(other)

    def __repr__(self) -> str:
        return f"HFSet({self._enc})"

    def __str__(self) -> str:
        return self._enc

    @property
    def encoding(self) -> str:
        return self._enc

    @property
    def members(self) -> frozenset[HFSet]:
        return self._members

    def issubset(self, other: HFSet) -> bool:
        return self._members <= other._members

    def union(self, other: HFSet) -> HFSet:
        return HFSet(self._members | other._members)

    def intersection(self, other: HFSet) -> HFSet:
        return HFSet(self._members & other._members)

    def difference(self, other: HFSet) -> HFSet:
        return HFSet(self._members - other._members)

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def rank(self) -> int:
        if self._rank is None:
            self._rank = 0 if not self._ordered else 1 + max(e.rank() for e in self._ordered)
        return self._rank


EMPTY = HFSet()


def hf(*elements: HFSet) -> HFSet:
    """Shorthand constructor: ``hf(EMPTY)`` is ``{∅}``."""
    return HFSet(elements)


def zermelo(m: int) -> HFSet:
    """The m-th Zermelo numeral: ``∅, {∅}, {{∅}}, ...``."""
    s = EMPTY
    for _ in range(m):
        s = HFSet((s,))
    return s


def encode(s: HFSet) -> str:
    return s._enc


class HFSyntaxError(ValueError):
    pass


def parse(text: str) -> HFSet:
    """Parse nested bracket syntax.

    Whitespace and commas between members are optional; member order and
    duplicates in the input do not matter.
    """
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and (text[pos].isspace() or text[pos] == ","):
            pos += 1

    def parse_set() -> HFSet:
        nonlocal pos
        skip()
        if pos >= n or text[pos] != "[":
            raise HFSyntaxError(f"expected '[' at offset {pos} in {text!r}")
        pos += 1
        members = []
        while True:
            skip()
            if pos >= n:
                raise HFSyntaxError(f"unterminated set in {text!r}")
            if text[pos] == "]":
                pos += 1
                return HFSet(members)
            members.append(parse_set())

    result = parse_set()
    skip()
    if pos != n:
        raise HFSyntaxError(f"trailing input at offset {pos} in {text!r}")
    return result


def rank(s: HFSet) -> int:
    return s.rank()


def bool_op(s: HFSet, t: HFSet, op: str) -> HFSet:
    if op == "union":
        return s.union(t)
    if op == "intersection":
        return s.intersection(t)
    if op == "difference":
        return s.difference(t)
    raise ValueError(f"unknown Boolean operator {op!r}")


def otimes(s: HFSet, t: HFSet) -> HFSet:
    """Unordered Cartesian product: all ``{u, v}`` with ``u in s`` and ``v in t``."""
    return HFSet(HFSet((u, v)) for u in s for v in t)


def pow12(s: HFSet) -> HFSet:
    out = [HFSet((u,)) for u in s]
    out.extend(HFSet(p) for p in combinations(s, 2))
    return HFSet(out)


def powast12(family: Iterable[HFSet]) -> HFSet:
    """1- and 2-element subsets of the union of ``family`` meeting every member."""
    fam = list(set(family))
    if not fam or any(not s for s in fam):
        return EMPTY
    universe = set()
    for s in fam:
        universe |= s.members
    ordered = sorted(universe, key=_key)
    out = []
    for u in ordered:
        if all(u in s for s in fam):
            out.append(HFSet((u,)))
    for u, v in combinations(ordered, 2):
        if all(u in s or v in s for s in fam):
            out.append(HFSet((u, v)))
    return HFSet(out)
