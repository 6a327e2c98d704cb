import json
import random

import pytest

from bstsat.formula import DiffLit, NeqLit, NormConjunction, UnionLit, UProdLit, normalize, parse, to_dnf
from bstsat.fulfill import (
    Certificate, Mode, ResourceLimit, check_fulfills, consistent_labels, decide, label_consistent, solve,
)
from bstsat.partition import induced_graph, venn_partition
from bstsat.tgraph import Place, TGraph
from conftest import structured_partition

# the worked certificate: x = y ⊗ y with y nonempty
WORKED = NormConjunction([UProdLit("x", "y", "y"), NeqLit("y", "w"), DiffLit("w", "y", "y")])
PY, PX = 0, 1
G = TGraph([Place(PY, frozenset({"y"})), Place(PX, frozenset({"x"}))], {(PY,): [PX]})


def test_worked_certificate():
    assert check_fulfills(G, {"x": {PX}, "y": {PY}, "w": set()}, WORKED)
    assert not check_fulfills(G, {"x": set(), "y": {PY}, "w": set()}, WORKED)


def test_empty_operand():
    c = NormConjunction([UProdLit("x", "y", "z")])
    g = TGraph([0])
    assert check_fulfills(g, {"x": set(), "y": set(), "z": {0}}, c)
    assert not check_fulfills(g, {"x": {0}, "y": set(), "z": {0}}, c)


def test_missing_variable():
    with pytest.raises(KeyError):
        check_fulfills(G, {"x": {PX}}, WORKED)


def test_c3_violation():
    c = NormConjunction([UProdLit("x", "y", "y")])
    g = TGraph([0, 1, 2], {(0,): [1], (2,): [1]})
    assert not check_fulfills(g, {"x": {1}, "y": {0}}, c)


@pytest.mark.parametrize("mode", ["ordinary", "finite"])
def test_solve_worked(mode):
    cert = solve(WORKED, mode)
    assert cert is not None
    cert.validate()
    assert {cert.graph.label(p) for p in cert.fmap["x"]} == {frozenset({"x"})}


def test_separating_example():
    c = normalize(to_dnf(parse("x != x \\ x and x >< x <= x"))[0])
    assert solve(c, "ordinary") is not None
    assert solve(c, "finite") is None


def test_trivially_unsat():
    for mode in Mode:
        assert solve(NormConjunction([NeqLit("x", "x")]), mode) is None


def test_decide_examples():
    assert decide("x = x").sat
    v = decide("x != x or x = x")
    assert v.sat and v.disjunct == to_dnf(parse("x = x"))[0]
    for mode in Mode:
        assert decide("x = x><x and x != x\\x", mode).status == "UNSAT"


def test_limits():
    c = normalize(to_dnf(parse("x != y"))[0])
    with pytest.raises(ResourceLimit):
        solve(c, max_places=0)
    with pytest.raises(ResourceLimit):
        solve(c, max_region_sets=1)
    assert decide("x != y", max_places=0).status == "UNKNOWN"
    # a limit that is not reached does not matter
    assert solve(c, max_places=1) is not None


def test_certificate_json_roundtrip():
    cert = solve(WORKED, "finite")
    data = json.loads(cert.dumps())
    assert set(data) >= {"places", "targets", "order", "fulfilling", "mode", "conjunction"}
    back = Certificate.from_json(data)
    back.validate()
    assert back.graph == cert.graph and back.order == cert.order and back.conj == cert.conj


def test_labels():
    c = NormConjunction([UnionLit("x", "y", "z")])
    labels = consistent_labels(c)
    assert all(label_consistent(L, c) for L in labels)
    assert frozenset({"y"}) not in labels and frozenset({"x", "y"}) in labels
    assert labels == [frozenset("xy"), frozenset("xz"), frozenset("xyz")]


def test_deterministic():
    c = normalize(to_dnf(parse("x = y >< z and y != z and z != x"))[0])
    a, b = solve(c, "finite"), solve(c, "finite")
    assert a.to_json() == b.to_json()


@pytest.mark.parametrize("seed", range(25))
def test_induced_certificates_fulfill(seed):
    # a partition model of a conjunction induces a fulfilling region map
    rng = random.Random(seed)
    p = structured_partition(rng)
    n = len(p)
    blocks = {"a": {i for i in range(n) if rng.random() < 0.5}, "b": set(range(n))}
    M = {v: sum((list(p.blocks[i]) for i in idx), []) for v, idx in blocks.items()}
    from bstsat.hfset import HFSet, otimes

    M = {v: HFSet(xs) for v, xs in M.items()}
    M["c"] = otimes(M["a"], M["a"])
    M["d"] = M["b"] - M["a"]
    lits = [UProdLit("c", "a", "a"), DiffLit("d", "b", "a")]
    vp, pa = venn_partition(M)
    g, _ = induced_graph(vp)
    F = {v: pa.assign[v] for v in M}
    assert check_fulfills(g, F, NormConjunction(lits))
