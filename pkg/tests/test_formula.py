import pytest
from hypothesis import given, strategies as st

from bstsat import formula as fm
from bstsat.formula import (
    EQ, SUBSETEQ, Atom, DiffLit, NeqLit, Not, NormConjunction, UnionLit, UProdLit, Var,
    normalize, parse, to_dnf, vars_of,
)
from bstsat.partition import eval_term, evaluate
from conftest import hf_sets

x, y, z = Var("x"), Var("y"), Var("z")


def test_parse_examples():
    assert parse("x = y | z") == Atom(x, EQ, fm.Union(y, z))
    assert parse("x >< x <= x") == Atom(fm.UProd(x, x), SUBSETEQ, x)
    assert parse("x != y") == Not(Atom(x, EQ, y))


def test_parse_error_position():
    with pytest.raises(fm.ParseError) as info:
        parse("x = y |")
    assert "end of input" in str(info.value)
    assert (info.value.line, info.value.column) == (1, 8)


@pytest.mark.parametrize("bad", ["x", "x = ", "x = y)", "(x = y", "x ? y", "$1 = x", "x = y and"])
def test_parse_rejects(bad):
    with pytest.raises(fm.ParseError):
        parse(bad)


def test_parse_layout_and_comments():
    f = parse("x = y  # first\n and\n (y | z) = x")
    assert f == fm.And(Atom(x, EQ, y), Atom(fm.Union(y, z), EQ, x))
    assert parse("(x = y)") == Atom(x, EQ, y)
    assert parse("((x | y)) = z") == Atom(fm.Union(x, y), EQ, z)


def test_left_associative_single_level():
    assert fm.parse_term("x | y \\ z") == fm.Diff(fm.Union(x, y), z)
    assert fm.parse_term("x | (y \\ z)") == fm.Union(x, fm.Diff(y, z))


def test_vars():
    assert vars_of(parse("x = y | z")) == {"x", "y", "z"}
    assert vars_of(parse("x != x")) == {"x"}
    assert vars_of(parse("not (a = b >< c)")) == {"a", "b", "c"}


def test_dnf_examples():
    A, B, C = (parse(s) for s in ("x = y", "y = z", "z = x"))
    assert to_dnf(A) == [[(A, True)]]
    assert to_dnf(fm.Or(A, B)) == [[(A, True)], [(B, True)]]
    assert to_dnf(fm.And(A, fm.Or(B, C))) == [[(A, True), (B, True)], [(A, True), (C, True)]]
    assert to_dnf(parse("not (x = y or y = z)")) == [[(A, False), (B, False)]]


def test_normalize_subseteq():
    c = normalize(to_dnf(parse("x <= y"))[0])
    assert set(c.literals) == {DiffLit("$1", "x", "y"), DiffLit("x", "x", "$1")}


def test_normalize_negative_compound():
    c = normalize(to_dnf(parse("x != y \\ z"))[0])
    assert set(c.literals) == {DiffLit("$1", "y", "z"), NeqLit("$1", "x")}


def test_normalize_fixpoint():
    lits = [UnionLit("x", "y", "z"), NeqLit("x", "y")]
    c = normalize([Atom(x, EQ, fm.Union(y, z)), Not(Atom(x, EQ, y))])
    assert set(c.literals) == set(lits)


def test_shared_subterms_get_one_name():
    c = normalize(to_dnf(parse("x = (y >< y) | z and x != (y >< y) \\ z"))[0])
    assert c.of_kind(UProdLit) == [UProdLit("$1", "y", "y")]


def test_conjunction_json_roundtrip():
    c = NormConjunction([UProdLit("x", "z", "y"), NeqLit("y", "x")])
    assert NormConjunction.from_json(c.to_json()) == c
    assert c.literals == (UProdLit("x", "y", "z"), NeqLit("x", "y"))


# -- models of a conjunct versus models of its normal form ------------------

names = st.sampled_from(["x", "y"])
terms = st.recursive(
    names.map(Var),
    lambda t: st.builds(fm.BinOp, st.sampled_from(["|", "&", "\\", "><"]), t, t),
    max_leaves=4,
)
atoms = st.builds(Atom, terms, st.sampled_from(["=", "!=", "<="]), terms)
formulas = st.recursive(
    atoms,
    lambda f: st.one_of(
        f.map(Not), st.builds(fm.And, f, f), st.builds(fm.Or, f, f),
        st.builds(fm.Implies, f, f), st.builds(fm.Iff, f, f),
    ),
    max_leaves=4,
)


def extend(M, c: NormConjunction):
    """Give each fresh variable the value of its defining term."""
    M = dict(M)
    for lit in c:
        if isinstance(lit, NeqLit) or lit.x in M:
            continue
        op = {UnionLit: "|", DiffLit: "\\", UProdLit: "><"}[type(lit)]
        M[lit.x] = eval_term(M, fm.BinOp(op, Var(lit.y), Var(lit.z)))
    return M


@given(formulas, hf_sets(2, 2), hf_sets(2, 2))
def test_dnf_is_equivalent(f, a, b):
    M = {"x": a, "y": b}
    via_dnf = any(all(evaluate(M, at) == pos for at, pos in conj) for conj in to_dnf(f))
    assert via_dnf == evaluate(M, f)


@given(formulas, hf_sets(2, 2), hf_sets(2, 2))
def test_normalization_preserves_models(f, a, b):
    M = {"x": a, "y": b}
    for conj in to_dnf(f):
        c = normalize(conj)
        holds = all(evaluate(M, at) == pos for at, pos in conj)
        assert evaluate(extend(M, c), c) == holds


@given(formulas)
def test_formatting_roundtrip(f):
    assert parse(fm.format_formula(f)) == parse(fm.format_formula(parse(fm.format_formula(f))))
    assert vars_of(parse(fm.format_formula(f))) == vars_of(f)


@given(formulas)
def test_normalize_idempotent(f):
    for conj in to_dnf(f):
        c = normalize(conj)
        again = normalize([fm.literal_formula(l) for l in c])
        assert set(again.literals) == set(c.literals)
