"""Formula syntax: AST, parser, DNF expansion and normalization.

Surface grammar (ASCII)::

    formula := disj
    disj    := conj ("or" conj)*
    conj    := unary ("and" unary)*
    unary   := "not" unary | "(" formula ")" | atom
    atom    := term ("=" | "!=" | "<=") term
    term    := primary (op primary)*      op in | & \\ ><, left-assoc, one level
    primary := IDENT | "(" term ")"

``#`` starts a comment running to end of line.  As a small extension the
keywords ``implies`` and ``iff`` are accepted at lowest precedence.

Normalized conjunctions contain only the four literal shapes
``x = y | z``, ``x = y \\ z``, ``x = y >< z`` and ``x != y``.  Variables
introduced by normalization are named ``$1``, ``$2``, ... and can never
clash with user identifiers.
"""
from __future__ import annotations

import re
from dataclasses import astuple, dataclass, field
from itertools import product
from typing import NamedTuple, Union as TUnion

__all__ = [
    "Var", "BinOp", "Term", "UNION", "INTER", "DIFF", "UPROD",
    "EQ", "NEQ", "SUBSETEQ",
    "Atom", "Not", "And", "Or", "Implies", "Iff", "Formula",
    "UnionLit", "DiffLit", "UProdLit", "NeqLit", "Literal", "NormConjunction",
    "ParseError", "parse", "parse_term", "vars_of", "to_dnf", "normalize",
    "is_fresh", "format_formula", "format_term", "conj",
]

FRESH_PREFIX = "$"

UNION, INTER, DIFF, UPROD = "|", "&", "\\", "><"
EQ, NEQ, SUBSETEQ = "=", "!=", "<="


# --------------------------------------------------------------------------
# terms and formulas


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Term"
    right: "Term"

    def __post_init__(self):
        if self.op not in (UNION, INTER, DIFF, UPROD):
            raise ValueError(f"unknown term operator {self.op!r}")


Term = TUnion[Var, BinOp]


def Union(a, b):  # noqa: N802 - constructor-style helpers
    return BinOp(UNION, a, b)


def Inter(a, b):  # noqa: N802
    return BinOp(INTER, a, b)


def Diff(a, b):  # noqa: N802
    return BinOp(DIFF, a, b)


def UProd(a, b):  # noqa: N802
    return BinOp(UPROD, a, b)


@dataclass(frozen=True)
class Atom:
    lhs: Term
    rel: str
    rhs: Term
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.rel not in (EQ, NEQ, SUBSETEQ):
            raise ValueError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = TUnion[Atom, Not, And, Or, Implies, Iff]


def conj(formulas) -> Formula | None:
    """Left-nested conjunction of a sequence (``None`` when empty)."""
    out = None
    for f in formulas:
        out = f if out is None else And(out, f)
    return out


def is_fresh(name: str) -> bool:
    return name.startswith(FRESH_PREFIX)


# --------------------------------------------------------------------------
# parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<op>!=|<=|><|[=|&\\()])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"and", "or", "not", "implies", "iff"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class _Tok(NamedTuple):
    kind: str  # 'op', 'ident', 'kw', 'eof'
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i, line, line_start = 0, 1, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        col = i - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "op":
            toks.append(_Tok("op", m.group(), line, col))
        elif kind == "ident":
            word = m.group()
            toks.append(_Tok("kw" if word in _KEYWORDS else "ident", word, line, col))
        i = m.end()
    toks.append(_Tok("eof", "", line, len(text) - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.cur
        where = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{msg} at {where}", tok.line, tok.col)

    def accept(self, kind: str, text: str | None = None) -> _Tok | None:
        tok = self.cur
        if tok.kind == kind and (text is None or tok.text == text):
            self.i += 1
            return tok
        return None

    def expect(self, kind: str, text: str, what: str) -> _Tok:
        tok = self.accept(kind, text)
        if tok is None:
            self.error(f"expected {what}")
        return tok

    def parse_formula(self) -> Formula:
        f = self.parse_iff()
        if self.cur.kind != "eof":
            self.error("unexpected token")
        return f

    def parse_iff(self) -> Formula:
        left = self.parse_implies()
        while self.accept("kw", "iff"):
            left = Iff(left, self.parse_implies())
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_disj()
        if self.accept("kw", "implies"):
            return Implies(left, self.parse_implies())
        return left

    def parse_disj(self) -> Formula:
        left = self.parse_conj()
        while self.accept("kw", "or"):
            left = Or(left, self.parse_conj())
        return left

    def parse_conj(self) -> Formula:
        left = self.parse_unary()
        while self.accept("kw", "and"):
            left = And(left, self.parse_unary())
        return left

    def parse_unary(self) -> Formula:
        if self.accept("kw", "not"):
            return Not(self.parse_unary())
        if self.cur.kind == "op" and self.cur.text == "(":
            # "(" may open a parenthesized formula or a parenthesized term
            save = self.i
            self.i += 1
            try:
                inner = self.parse_iff()
                self.expect("op", ")", "')'")
            except ParseError as first:
                self.i = save
                try:
                    return self.parse_atom()
                except ParseError as second:
                    # report whichever reading got further into the input
                    raise max(first, second, key=lambda e: (e.line, e.column)) from None
            if self.cur.kind == "op" and self.cur.text in (EQ, NEQ, SUBSETEQ, UNION, INTER, DIFF, UPROD):
                # it was really a term like "(x | y) = z"
                self.i = save
                return self.parse_atom()
            return inner
        return self.parse_atom()

    def parse_atom(self) -> Atom:
        start = self.cur
        lhs = self.parse_term()
        tok = self.cur
        if tok.kind == "op" and tok.text in (EQ, NEQ, SUBSETEQ):
            self.i += 1
            rhs = self.parse_term()
            atom = Atom(lhs, EQ if tok.text == NEQ else tok.text, rhs, pos=(start.line, start.col))
            return Not(atom) if tok.text == NEQ else atom
        self.error("expected '=', '!=' or '<='")

    def parse_term(self) -> Term:
        left = self.parse_primary()
        while self.cur.kind == "op" and self.cur.text in (UNION, INTER, DIFF, UPROD):
            op = self.cur.text
            self.i += 1
            left = BinOp(op, left, self.parse_primary())
        return left

    def parse_primary(self) -> Term:
        tok = self.accept("ident")
        if tok is not None:
            return Var(tok.text)
        if self.accept("op", "("):
            t = self.parse_term()
            self.expect("op", ")", "')'")
            return t
        self.error("expected a variable or '('")


def parse(text: str) -> Formula:
    """Parse a formula.  ``x != y`` is returned as ``Not(Atom(x, '=', y))``."""
    return _Parser(text).parse_formula()


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.parse_term()
    if p.cur.kind != "eof":
        p.error("unexpected token")
    return t


# --------------------------------------------------------------------------
# printing


def format_term(t: Term, top: bool = True) -> str:
    if isinstance(t, Var):
        return t.name
    # one precedence level, left-associative: only right operands need parens
    s = f"{format_term(t.left, True)} {t.op} {format_term(t.right, False)}"
    return s if top else f"({s})"


def format_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f"{format_term(f.lhs)} {f.rel} {format_term(f.rhs)}"
    if isinstance(f, Not):
        if isinstance(f.arg, Atom) and f.arg.rel == EQ:
            return f"{format_term(f.arg.lhs)} != {format_term(f.arg.rhs)}"
        return f"not ({format_formula(f.arg)})"
    word = {And: "and", Or: "or", Implies: "implies", Iff: "iff"}[type(f)]
    return f"({format_formula(f.left)}) {word} ({format_formula(f.right)})"


# --------------------------------------------------------------------------
# variables and DNF


def _term_vars(t: Term, out: set):
    if isinstance(t, Var):
        out.add(t.name)
    else:
        _term_vars(t.left, out)
        _term_vars(t.right, out)


def vars_of(f) -> frozenset[str]:
    """Variables occurring in a formula, a term, or a DNF conjunct."""
    out: set[str] = set()

    def walk(g):
        if isinstance(g, (Var, BinOp)):
            _term_vars(g, out)
        elif isinstance(g, Atom):
            _term_vars(g.lhs, out)
            _term_vars(g.rhs, out)
        elif isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, tuple) and len(g) == 2 and isinstance(g[0], Atom):
            walk(g[0])
        elif isinstance(g, (list, tuple)):
            for h in g:
                walk(h)
        else:
            raise TypeError(f"not a formula: {g!r}")

    walk(f)
    return frozenset(out)


def _dnf(f: Formula, positive: bool) -> list[list[tuple[Atom, bool]]]:
    if isinstance(f, Atom):
        if f.rel == NEQ:
            return [[(Atom(f.lhs, EQ, f.rhs, f.pos), not positive)]]
        return [[(f, positive)]]
    if isinstance(f, Not):
        return _dnf(f.arg, not positive)
    if isinstance(f, Implies):
        return _dnf(Or(Not(f.left), f.right), positive)
    if isinstance(f, Iff):
        both = Or(And(f.left, f.right), And(Not(f.left), Not(f.right)))
        return _dnf(both, positive)
    is_and = isinstance(f, And)
    if is_and == positive:
        # conjunction of the two sides
        return [a + b for a, b in product(_dnf(f.left, positive), _dnf(f.right, positive))]
    return _dnf(f.left, positive) + _dnf(f.right, positive)


def to_dnf(f: Formula) -> list[list[tuple[Atom, bool]]]:
    """Disjunctive normal form as a list of conjuncts of ``(atom, positive)`` pairs.

    ``Neq`` atoms are rewritten to negated ``Eq`` atoms and repeated literals
    inside a conjunct are dropped.
    """
    out = []
    for c in _dnf(f, True):
        seen = []
        for lit in c:
            if lit not in seen:
                seen.append(lit)
        out.append(seen)
    return out


# --------------------------------------------------------------------------
# normalized conjunctions


@dataclass(frozen=True)
class _Lit:
    # equality and hashing include the literal kind, unlike plain tuples

    def __iter__(self):
        return iter(astuple(self))


@dataclass(frozen=True)
class UnionLit(_Lit):
    x: str
    y: str
    z: str

    def __str__(self):
        return f"{self.x} = {self.y} | {self.z}"


@dataclass(frozen=True)
class DiffLit(_Lit):
    x: str
    y: str
    z: str

    def __str__(self):
        return f"{self.x} = {self.y} \\ {self.z}"


@dataclass(frozen=True)
class UProdLit(_Lit):
    x: str
    y: str
    z: str

    def __str__(self):
        return f"{self.x} = {self.y} >< {self.z}"


@dataclass(frozen=True)
class NeqLit(_Lit):
    x: str
    y: str

    def __str__(self):
        return f"{self.x} != {self.y}"


Literal = TUnion[UnionLit, DiffLit, UProdLit, NeqLit]

_LIT_KIND = {UnionLit: "union", DiffLit: "diff", UProdLit: "uprod", NeqLit: "neq"}
_KIND_LIT = {v: k for k, v in _LIT_KIND.items()}


def _canonical(lit: Literal) -> Literal:
    # union, product and disequality are symmetric in their operands
    if isinstance(lit, (UnionLit, UProdLit)) and lit.z < lit.y:
        return type(lit)(lit.x, lit.z, lit.y)
    if isinstance(lit, NeqLit) and lit.y < lit.x:
        return NeqLit(lit.y, lit.x)
    return lit


@dataclass(frozen=True)
class NormConjunction:
    literals: tuple
    vars: frozenset

    def __init__(self, literals=(), vars=()):  # noqa: A002
        lits = []
        for lit in literals:
            lit = _canonical(lit)
            if lit not in lits:
                lits.append(lit)
        vs = set(vars)
        for lit in lits:
            vs.update(lit)
        object.__setattr__(self, "literals", tuple(lits))
        object.__setattr__(self, "vars", frozenset(vs))

    def __iter__(self):
        return iter(self.literals)

    def __len__(self):
        return len(self.literals)

    def __str__(self):
        return " and ".join(str(l) for l in self.literals) if self.literals else "true"

    @property
    def has_uprod(self) -> bool:
        return any(isinstance(l, UProdLit) for l in self.literals)

    @property
    def user_vars(self) -> frozenset:
        return frozenset(v for v in self.vars if not is_fresh(v))

    def of_kind(self, cls):
        return [l for l in self.literals if isinstance(l, cls)]

    def to_formula(self) -> Formula | None:
        return conj(literal_formula(l) for l in self.literals)

    def to_json(self) -> list:
        return [[_LIT_KIND[type(l)], *l] for l in self.literals]

    @classmethod
    def from_json(cls, data) -> NormConjunction:
        return cls([_KIND_LIT[item[0]](*item[1:]) for item in data])


def literal_formula(lit: Literal) -> Formula:
    if isinstance(lit, NeqLit):
        return Not(Atom(Var(lit.x), EQ, Var(lit.y)))
    op = {UnionLit: UNION, DiffLit: DIFF, UProdLit: UPROD}[type(lit)]
    return Atom(Var(lit.x), EQ, BinOp(op, Var(lit.y), Var(lit.z)))


class _Normalizer:
    def __init__(self, taken: frozenset[str]):
        self.taken = taken
        self.counter = 0
        self.names: dict[Term, str] = {}
        self.out: list[Literal] = []

    def fresh(self) -> str:
        while True:
            self.counter += 1
            name = f"{FRESH_PREFIX}{self.counter}"
            if name not in self.taken:
                return name

    def name(self, t: Term) -> str:
        """A variable denoting ``t``; compound terms get a memoized fresh name."""
        if isinstance(t, Var):
            return t.name
        if t in self.names:
            return self.names[t]
        a = self.name(t.left)
        b = self.name(t.right)
        key = BinOp(t.op, Var(a), Var(b))
        if key in self.names:
            self.names[t] = self.names[key]
            return self.names[key]
        v = self.fresh()
        self.names[t] = self.names[key] = v
        self.define(v, t.op, a, b)
        return v

    def define(self, x: str, op: str, a: str, b: str):
        if op == UNION:
            self.out.append(UnionLit(x, a, b))
        elif op == DIFF:
            self.out.append(DiffLit(x, a, b))
        elif op == UPROD:
            self.out.append(UProdLit(x, a, b))
        else:
            # a & b == a \ (a \ b)
            w = self.name(BinOp(DIFF, Var(a), Var(b)))
            self.out.append(DiffLit(x, a, w))

    def equal(self, lhs: Term, rhs: Term):
        if isinstance(lhs, BinOp) and isinstance(rhs, Var):
            lhs, rhs = rhs, lhs
        x = self.name(lhs)
        if isinstance(rhs, Var):
            self.out.append(UnionLit(x, rhs.name, rhs.name))
        else:
            self.define(x, rhs.op, self.name(rhs.left), self.name(rhs.right))

    def add(self, atom: Atom, positive: bool):
        rel = atom.rel
        if rel == NEQ:
            rel, positive = EQ, not positive
        if rel == EQ:
            if positive:
                self.equal(atom.lhs, atom.rhs)
            else:
                self.out.append(NeqLit(self.name(atom.lhs), self.name(atom.rhs)))
            return
        # a <= b  iff  a = a & b
        a = self.name(atom.lhs)
        b = self.name(atom.rhs)
        if positive:
            self.define(a, INTER, a, b)
        else:
            m = self.name(BinOp(INTER, Var(a), Var(b)))
            self.out.append(NeqLit(m, a))


def normalize(conjunct) -> NormConjunction:
    """Turn a conjunct of ``(atom, positive)`` pairs into an equisatisfiable
    :class:`NormConjunction`.

    Compound subterms are named innermost-first (identical subterms share one
    fresh variable), ``a <= b`` becomes ``a = a & b``, ``a & b`` is rewritten
    through two differences, and a negated equation between compound terms
    names both sides and keeps a single disequality.
    """
    items = []
    for item in conjunct:
        if isinstance(item, Atom):
            items.append((item, True))
        elif isinstance(item, Not) and isinstance(item.arg, Atom):
            items.append((item.arg, False))
        else:
            items.append(item)
    taken = vars_of([a for a, _ in items]) if items else frozenset()
    norm = _Normalizer(taken)
    for atom, positive in items:
        norm.add(atom, positive)
    return NormConjunction(norm.out, taken)
