"""Prenex MSO1 formulas: parsing and a naive quantifier evaluator.

Grammar::

    formula  := prefix ':' matrix
    prefix   := (('exists' | 'forall') ('set' | 'vertex') IDENT)+
    matrix   := or_expr ('->' matrix)?
    or_expr  := and_expr ('|' and_expr)*
    and_expr := unary ('&' unary)*
    unary    := '!' unary | '(' matrix ')' | atom
    atom     := 'adj' '(' IDENT ',' IDENT ')' | IDENT '=' IDENT | IDENT 'in' IDENT
              | 'true' | 'false'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from divcw.graph import ColoredGraph

EXISTS, FORALL = "exists", "forall"
SET, VERTEX = "set", "vertex"


class FormulaError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at offset {pos})")


@dataclass(frozen=True)
class Quantifier:
    kind: str  # exists | forall
    sort: str  # set | vertex
    name: str


@dataclass(frozen=True)
class Adj:
    x: str
    y: str


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class In:
    x: str
    s: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Formula:
    prefix: tuple[Quantifier, ...]
    matrix: object
    text: str = ""

    @property
    def q(self) -> int:
        return len(self.prefix)

    @property
    def q_v(self) -> int:
        return sum(1 for p in self.prefix if p.sort == VERTEX)

    @property
    def q_s(self) -> int:
        return self.q - self.q_v

    def vertex_vars(self) -> list[str]:
        return [p.name for p in self.prefix if p.sort == VERTEX]

    def set_vars(self) -> list[str]:
        return [p.name for p in self.prefix if p.sort == SET]

    def is_vertex_problem(self) -> bool:
        return bool(self.prefix) and self.prefix[0].kind == EXISTS and self.prefix[0].sort == SET

    def __str__(self) -> str:
        return self.text or format_formula(self)


_TOKEN = re.compile(r"\s*(?:(->)|([A-Za-z_][A-Za-z0-9_]*)|([():,!&|=]))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        tok = m.group(1) or m.group(2) or m.group(3)
        toks.append((tok, m.start(m.lastindex)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.sorts: dict[str, str] = {}

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            what = f", expected {expected!r}" if expected else ""
            raise FormulaError(f"unexpected end of formula{what}", self.pos())
        if expected is not None and tok != expected:
            raise FormulaError(f"expected {expected!r}, got {tok!r}", self.pos())
        self.i += 1
        return tok

    def ident(self) -> str:
        tok = self.peek()
        if tok is None or not re.fullmatch(r"[A-Za-z_]\w*", tok) or tok in _KEYWORDS:
            raise FormulaError(f"expected identifier, got {tok!r}", self.pos())
        self.i += 1
        return tok

    def formula(self) -> Formula:
        prefix = []
        while self.peek() in (EXISTS, FORALL):
            kind = self.take()
            sort = self.peek()
            if sort not in (SET, VERTEX):
                raise FormulaError(
                    f"expected 'set' or 'vertex' after {kind!r}; formulas must be prenex", self.pos()
                )
            self.take()
            at = self.pos()
            name = self.ident()
            if name in self.sorts:
                raise FormulaError(f"duplicate variable {name!r}", at)
            self.sorts[name] = sort
            prefix.append(Quantifier(kind, sort, name))
        if not prefix:
            raise FormulaError("formula needs at least one quantifier", self.pos())
        if self.peek() != ":":
            raise FormulaError("expected ':' after the quantifier prefix; formulas must be prenex", self.pos())
        self.take(":")
        matrix = self.implies()
        if self.peek() is not None:
            raise FormulaError(f"trailing input {self.peek()!r}", self.pos())
        return Formula(tuple(prefix), matrix, self.text.strip())

    def implies(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disj(self):
        node = self.conj()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.conj())
        return node

    def conj(self):
        node = self.unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            node = self.implies()
            self.take(")")
            return node
        if tok in (EXISTS, FORALL):
            raise FormulaError("quantifier inside the matrix; formulas must be prenex", self.pos())
        if tok in ("true", "false"):
            self.take()
            return Const(tok == "true")
        if tok == "adj":
            self.take()
            self.take("(")
            x = self.var(VERTEX)
            self.take(",")
            y = self.var(VERTEX)
            self.take(")")
            return Adj(x, y)
        x = self.var(VERTEX)
        op = self.peek()
        if op == "=":
            self.take()
            return Eq(x, self.var(VERTEX))
        if op == "in":
            self.take()
            return In(x, self.var(SET))
        raise FormulaError(f"expected '=' or 'in' after {x!r}", self.pos())

    def var(self, sort: str) -> str:
        at = self.pos()
        name = self.ident()
        if name not in self.sorts:
            raise FormulaError(f"free variable {name!r}", at)
        if self.sorts[name] != sort:
            raise FormulaError(f"variable {name!r} is a {self.sorts[name]} variable, expected {sort}", at)
        return name


_KEYWORDS = {EXISTS, FORALL, SET, VERTEX, "in", "adj", "true", "false"}


def parse_formula(text: str) -> Formula:
    return _Parser(text).formula()


def format_matrix(node) -> str:
    if isinstance(node, Adj):
        return f"adj({node.x},{node.y})"
    if isinstance(node, Eq):
        return f"{node.x} = {node.y}"
    if isinstance(node, In):
        return f"{node.x} in {node.s}"
    if isinstance(node, Const):
        return "true" if node.value else "false"
    if isinstance(node, Not):
        return f"!({format_matrix(node.arg)})"
    op = {And: "&", Or: "|", Implies: "->"}[type(node)]
    return f"({format_matrix(node.left)} {op} {format_matrix(node.right)})"


def format_formula(phi: Formula) -> str:
    prefix = " ".join(f"{p.kind} {p.sort} {p.name}" for p in phi.prefix)
    return f"{prefix} : {format_matrix(phi.matrix)}"


# ---------------------------------------------------------------- compilation


def compile_matrix(matrix, atom: Callable[[object], Callable]) -> Callable:
    """Turn the matrix into a closure; ``atom`` maps each atom to a predicate."""
    if isinstance(matrix, (Adj, Eq, In)):
        return atom(matrix)
    if isinstance(matrix, Const):
        value = matrix.value
        return lambda *a: value
    if isinstance(matrix, Not):
        f = compile_matrix(matrix.arg, atom)
        return lambda *a: not f(*a)
    left = compile_matrix(matrix.left, atom)
    right = compile_matrix(matrix.right, atom)
    if isinstance(matrix, And):
        return lambda *a: left(*a) and right(*a)
    if isinstance(matrix, Or):
        return lambda *a: left(*a) or right(*a)
    return lambda *a: (not left(*a)) or right(*a)


def const_value(matrix) -> bool:
    """Evaluate a matrix that contains no atoms."""
    f = compile_matrix(matrix, lambda a: (_ for _ in ()).throw(FormulaError("matrix has atoms")))
    return f()


# ---------------------------------------------------------------- naive oracle


class NaiveEvaluator:
    """Direct quantifier recursion over vertices and vertex subsets."""

    def __init__(self, phi: Formula, G: ColoredGraph):
        self.phi = phi
        self.G = G
        self.verts = sorted(G.vertices)
        n = len(self.verts)
        pos = {v: i for i, v in enumerate(self.verts)}
        self.adj = [[False] * n for _ in range(n)]
        for u, v in G.edge_list():
            self.adj[pos[u]][pos[v]] = self.adj[pos[v]][pos[u]] = True
        self.slot = {p.name: i for i, p in enumerate(phi.prefix)}
        adj = self.adj
        slot = self.slot

        def atom(a):
            if isinstance(a, Adj):
                i, j = slot[a.x], slot[a.y]
                return lambda env: adj[env[i]][env[j]]
            if isinstance(a, Eq):
                i, j = slot[a.x], slot[a.y]
                return lambda env: env[i] == env[j]
            i, s = slot[a.x], slot[a.s]
            return lambda env: bool(env[s] >> env[i] & 1)

        self.matrix = compile_matrix(phi.matrix, atom)

    def _eval(self, pos: int, env: list) -> bool:
        if pos == len(self.phi.prefix):
            return self.matrix(env)
        quant = self.phi.prefix[pos]
        n = len(self.verts)
        choices = range(1 << n) if quant.sort == SET else range(n)
        want = quant.kind == EXISTS
        for c in choices:
            env[pos] = c
            if self._eval(pos + 1, env) == want:
                return want
        return not want

    def holds(self) -> bool:
        return self._eval(0, [None] * len(self.phi.prefix))

    def holds_for(self, S) -> bool:
        """Evaluate with the first (set) variable fixed to S."""
        if not self.phi.is_vertex_problem():
            raise FormulaError("first quantifier must be 'exists set'")
        mask = sum(1 << i for i, v in enumerate(self.verts) if v in set(S))
        env = [None] * len(self.phi.prefix)
        env[0] = mask
        return self._eval(1, env)

    def solutions(self) -> list[frozenset[str]]:
        out = []
        for mask in range(1 << len(self.verts)):
            env = [None] * len(self.phi.prefix)
            env[0] = mask
            if self._eval(1, env):
                out.append(frozenset(v for i, v in enumerate(self.verts) if mask >> i & 1))
        return out


def naive_holds(phi: Formula, G: ColoredGraph) -> bool:
    return NaiveEvaluator(phi, G).holds()


# A few named formulas used by the CLI and tests.
DOMINATING_SET = (
    "exists set S forall vertex x exists vertex y : (x in S) | (adj(x,y) & y in S)"
)
VERTEX_COVER = "exists set S forall vertex x forall vertex y : !adj(x,y) | (x in S) | (y in S)"
INDEPENDENT_SET = (
    "exists set S forall vertex x forall vertex y : (x in S & y in S) -> !adj(x,y)"
)

