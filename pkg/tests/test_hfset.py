from hypothesis import given, strategies as st

from bstsat.hfset import (
    EMPTY, HFSet, HFSyntaxError, bool_op, encode, hf, otimes, parse, pow12, powast12, rank, zermelo,
)
from conftest import hf_sets

import pytest

E = EMPTY
S1 = hf(E)  # {∅}
S2 = hf(S1)  # {{∅}}


def test_rank_examples():
    assert rank(E) == 0
    assert rank(S1) == 1
    assert rank(hf(E, S1)) == 2
    assert rank(zermelo(5)) == 5


def test_bool_ops():
    assert bool_op(E, S1, "union") == S1
    s = hf(E, S1)
    assert bool_op(s, s, "difference") == E
    # {∅,{∅}} ∩ {{∅}}: the shared member is {∅}
    assert bool_op(hf(E, S1), hf(S1), "intersection") == hf(S1)
    with pytest.raises(ValueError):
        bool_op(s, s, "xor")


def test_otimes_examples():
    assert otimes(E, S1) == E
    assert otimes(S1, S1) == hf(S1)
    # pairs (∅,∅) -> {∅}, ({∅},∅) -> {∅,{∅}}
    assert otimes(hf(E, S1), S1) == hf(hf(E), hf(E, S1))


def test_pow12_examples():
    assert pow12(E) == E
    assert pow12(S1) == hf(S1)
    assert pow12(hf(E, S1)) == hf(hf(E), hf(S1), hf(E, S1))


def test_powast12_examples():
    assert powast12([S1, S2]) == hf(hf(E, S1))
    s = hf(E, S1, S2)
    assert powast12([s]) == pow12(s)
    three = [hf(E), hf(S1), hf(S2)]
    assert powast12(three) == E
    assert powast12([]) == E
    assert powast12([E, S1]) == E


def test_encoding_and_order():
    assert encode(E) == "[]"
    assert encode(hf(S1, E)) == "[[],[[]]]"
    assert sorted([S2, E, S1]) == [E, S1, S2]
    assert parse(" [ [[]] , [], [] ] ") == hf(E, S1)


@pytest.mark.parametrize("bad", ["", "[", "[]]", "[x]", "[][]"])
def test_parse_errors(bad):
    with pytest.raises(HFSyntaxError):
        parse(bad)


def test_members_must_be_hfsets():
    with pytest.raises(TypeError):
        HFSet([1])


@given(hf_sets(4))
def test_roundtrip(s):
    assert parse(encode(s)) == s
    assert encode(parse(encode(s))) == encode(s)


@given(hf_sets(), hf_sets())
def test_otimes_commutes(s, t):
    assert otimes(s, t) == otimes(t, s)


@given(hf_sets(), hf_sets())
def test_powast12_pair_is_otimes(s, t):
    assert powast12([s, t]) == otimes(s, t)


@given(st.lists(hf_sets(), max_size=3), st.lists(hf_sets(), max_size=3))
def test_distributivity(S, T):
    union = lambda fam: HFSet(e for s in fam for e in s)  # noqa: E731
    rhs = HFSet(e for s in S for t in T for e in otimes(s, t))
    assert otimes(union(S), union(T)) == rhs


@given(hf_sets(), hf_sets())
def test_equality_is_encoding_equality(s, t):
    assert (s == t) == (encode(s) == encode(t))
    assert (s == t) == (s.members == t.members)


@given(hf_sets())
def test_rank_recursion(s):
    expected = 0 if not s else 1 + max(rank(e) for e in s)
    assert rank(s) == expected
