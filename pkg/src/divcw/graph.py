"""Colored graphs and cliquewidth decompositions.

A decomposition is a rooted tree of four node kinds (intro, union, recolor,
addedges).  Evaluating it bottom-up yields a colored graph.  Vertex names are
opaque strings; wherever a canonical order is needed they are sorted
lexicographically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union as TUnion


class DecompositionError(ValueError):
    """Raised for malformed decomposition or graph input."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class Intro:
    id: str
    vertex: str
    color: int

    @property
    def children(self) -> tuple[str, ...]:
        return ()


@dataclass(frozen=True)
class Union:
    id: str
    left: str
    right: str

    @property
    def children(self) -> tuple[str, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Recolor:
    id: str
    child: str
    a: int
    b: int

    @property
    def children(self) -> tuple[str, ...]:
        return (self.child,)


@dataclass(frozen=True)
class AddEdges:
    id: str
    child: str
    a: int
    b: int

    @property
    def children(self) -> tuple[str, ...]:
        return (self.child,)


Node = TUnion[Intro, Union, Recolor, AddEdges]


def _edge(u: str, v: str) -> frozenset[str]:
    return frozenset((u, v))


@dataclass(frozen=True)
class ColoredGraph:
    vertices: tuple[str, ...]
    colors: dict[str, int]
    edges: frozenset[frozenset[str]]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacent(self, u: str, v: str) -> bool:
        return _edge(u, v) in self.edges

    def neighbors(self, v: str) -> set[str]:
        out = set()
        for e in self.edges:
            if v in e:
                out |= e - {v}
        return out

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def edge_list(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def same_graph(self, other: "ColoredGraph") -> bool:
        """Equality of vertex sets and edge sets, ignoring colors and order."""
        return set(self.vertices) == set(other.vertices) and self.edges == other.edges


@dataclass(frozen=True)
class CwDecomposition:
    nodes: dict[str, Node]
    root: str
    width: int = 0
    # post-order of node ids, children before parents
    order: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.width:
            colors = [c for node in self.nodes.values() for c in _node_colors(node)]
            object.__setattr__(self, "width", max(colors, default=1))
        if not self.order and self.root in self.nodes:
            object.__setattr__(self, "order", tuple(_postorder(self.nodes, self.root)))

    def __getitem__(self, node_id: str) -> Node:
        return self.nodes[node_id]

    def children(self, node_id: str) -> tuple[str, ...]:
        return self.nodes[node_id].children

    @property
    def leaves(self) -> list[Intro]:
        return [n for n in (self.nodes[t] for t in self.order) if isinstance(n, Intro)]

    @property
    def num_vertices(self) -> int:
        return sum(1 for n in self.nodes.values() if isinstance(n, Intro))

    def leaf_of(self) -> dict[str, str]:
        """Map vertex name -> id of its intro node."""
        return {n.vertex: n.id for n in self.nodes.values() if isinstance(n, Intro)}

    def color_counts(self) -> dict[str, tuple[int, ...]]:
        """Number of vertices of each color in G_t, for every node t."""
        w = self.width
        counts: dict[str, tuple[int, ...]] = {}
        for t in self.order:
            node = self.nodes[t]
            if isinstance(node, Intro):
                c = [0] * w
                c[node.color - 1] = 1
            elif isinstance(node, Union):
                c = [x + y for x, y in zip(counts[node.left], counts[node.right])]
            elif isinstance(node, Recolor):
                c = list(counts[node.child])
                if node.a != node.b:
                    c[node.b - 1] += c[node.a - 1]
                    c[node.a - 1] = 0
            else:
                c = list(counts[node.child])
            counts[t] = tuple(c)
        return counts


def _node_colors(node: Node) -> tuple[int, ...]:
    if isinstance(node, Intro):
        return (node.color,)
    if isinstance(node, (Recolor, AddEdges)):
        return (node.a, node.b)
    return ()


def _postorder(nodes: dict[str, Node], root: str) -> Iterator[str]:
    # iterative; unary chains can be long
    stack: list[tuple[str, bool]] = [(root, False)]
    seen: set[str] = set()
    while stack:
        t, expanded = stack.pop()
        if expanded:
            yield t
            continue
        if t in seen or t not in nodes:
            continue
        seen.add(t)
        stack.append((t, True))
        for c in reversed(nodes[t].children):
            stack.append((c, False))


def validate(D: CwDecomposition) -> list[str]:
    """Return a list of invariant violations; empty means valid."""
    problems: list[str] = []
    nodes = D.nodes
    if D.root not in nodes:
        problems.append(f"root {D.root!r} is not a declared node")
        return problems

    parents: dict[str, list[str]] = {t: [] for t in nodes}
    for t, node in nodes.items():
        if node.id != t:
            problems.append(f"node {t} stored under mismatched id {node.id}")
        for c in node.children:
            if c not in nodes:
                problems.append(f"node {t} references undefined child {c}")
            else:
                parents[c].append(t)
    for t, ps in parents.items():
        if len(ps) > 1:
            problems.append(f"node {t} has multiple parents: {', '.join(sorted(ps))}")
    if parents[D.root]:
        problems.append(f"root {D.root} has a parent")
    orphans = sorted(t for t, ps in parents.items() if not ps and t != D.root)
    if orphans:
        problems.append(f"multiple roots: {', '.join([D.root] + orphans)}")

    reachable = set(_postorder(nodes, D.root))
    cyclic = sorted(t for t in nodes if t not in reachable and parents[t])
    if cyclic:
        problems.append(f"nodes unreachable from root (cycle?): {', '.join(cyclic)}")

    seen_vertex: dict[str, str] = {}
    for t in sorted(nodes):
        node = nodes[t]
        for c in _node_colors(node):
            if not 1 <= c <= D.width:
                problems.append(f"color out of range at node {t}: {c} not in [1, {D.width}]")
        if isinstance(node, AddEdges) and node.a == node.b:
            problems.append(f"addedges at node {t} joins color {node.a} to itself")
        if isinstance(node, Intro):
            if node.vertex in seen_vertex:
                problems.append(
                    f"duplicate introduction of vertex {node.vertex} at {seen_vertex[node.vertex]} and {t}"
                )
            else:
                seen_vertex[node.vertex] = t
    return problems


def evaluate(D: CwDecomposition) -> ColoredGraph:
    """Build the colored graph generated at the root."""
    # per node: (vertex list, color map, edge set); children consumed once
    state: dict[str, tuple[list[str], dict[str, int], set[frozenset[str]]]] = {}
    for t in D.order:
        node = D.nodes[t]
        if isinstance(node, Intro):
            state[t] = ([node.vertex], {node.vertex: node.color}, set())
        elif isinstance(node, Union):
            v1, c1, e1 = state.pop(node.left)
            v2, c2, e2 = state.pop(node.right)
            assert not (c1.keys() & c2.keys()), f"union {t} of overlapping vertex sets"
            c1.update(c2)
            e1 |= e2
            state[t] = (v1 + v2, c1, e1)
        elif isinstance(node, Recolor):
            vs, cs, es = state.pop(node.child)
            for v, c in cs.items():
                if c == node.a:
                    cs[v] = node.b
            state[t] = (vs, cs, es)
        else:
            vs, cs, es = state.pop(node.child)
            side_a = [v for v in vs if cs[v] == node.a]
            side_b = [v for v in vs if cs[v] == node.b]
            for u in side_a:
                for v in side_b:
                    if u != v:
                        es.add(_edge(u, v))
            state[t] = (vs, cs, es)
    vs, cs, es = state[D.root]
    return ColoredGraph(tuple(vs), dict(cs), frozenset(es))


# ---------------------------------------------------------------- text formats

_ARITY = {"intro": 3, "union": 3, "recolor": 4, "addedges": 4, "root": 1}


def _tokens(line: str) -> list[tuple[str, int]]:
    out = []
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        out.append((tok, col + 1))
        col += len(tok)
    return out


def _color(tok: str, lineno: int, col: int) -> int:
    try:
        c = int(tok)
    except ValueError:
        raise DecompositionError(f"expected integer color, got {tok!r}", lineno, col) from None
    if c < 1:
        raise DecompositionError(f"color out of range: {c}", lineno, col)
    return c


def parse_decomposition(text: str) -> CwDecomposition:
    """Parse the line-oriented decomposition format and validate the result."""
    nodes: dict[str, Node] = {}
    roots: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        (kw, kcol), args = toks[0], toks[1:]
        if kw not in _ARITY:
            raise DecompositionError(f"unknown directive {kw!r}", lineno, kcol)
        if len(args) != _ARITY[kw]:
            raise DecompositionError(
                f"{kw} expects {_ARITY[kw]} arguments, got {len(args)}", lineno, kcol
            )
        if kw == "root":
            roots.append((args[0][0], lineno))
            continue
        node_id, icol = args[0]
        if node_id in nodes:
            raise DecompositionError(f"duplicate node id {node_id!r}", lineno, icol)
        if kw == "intro":
            vertex = args[1][0]
            for other in nodes.values():
                if isinstance(other, Intro) and other.vertex == vertex:
                    raise DecompositionError(
                        f"duplicate introduction of vertex {vertex!r}", lineno, args[1][1]
                    )
            node: Node = Intro(node_id, vertex, _color(*args[2], lineno))
        elif kw == "union":
            node = Union(node_id, args[1][0], args[2][0])
        elif kw == "recolor":
            node = Recolor(node_id, args[1][0], _color(*args[2], lineno), _color(*args[3], lineno))
        else:
            node = AddEdges(node_id, args[1][0], _color(*args[2], lineno), _color(*args[3], lineno))
        nodes[node_id] = node

    if not roots:
        raise DecompositionError("missing root directive")
    if len(roots) > 1:
        raise DecompositionError("multiple roots declared", roots[1][1])
    root = roots[0][0]
    for node in nodes.values():
        for c in node.children:
            if c not in nodes:
                raise DecompositionError(f"dangling child reference {c!r} in node {node.id}")
    if root not in nodes:
        raise DecompositionError(f"dangling root reference {root!r}", roots[0][1])
    D = CwDecomposition(nodes, root)
    violations = validate(D)
    if violations:
        raise DecompositionError("; ".join(violations))
    return D


def format_decomposition(D: CwDecomposition) -> str:
    lines = []
    for t in D.order:
        node = D.nodes[t]
        if isinstance(node, Intro):
            lines.append(f"intro {t} {node.vertex} {node.color}")
        elif isinstance(node, Union):
            lines.append(f"union {t} {node.left} {node.right}")
        elif isinstance(node, Recolor):
            lines.append(f"recolor {t} {node.child} {node.a} {node.b}")
        else:
            lines.append(f"addedges {t} {node.child} {node.a} {node.b}")
    lines.append(f"root {D.root}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> ColoredGraph:
    """Parse an edge-list file of ``v <name>`` and ``e <u> <v>`` lines."""
    vertices: list[str] = []
    edges: set[frozenset[str]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        kw = toks[0][0]
        if kw == "v" and len(toks) == 2:
            name = toks[1][0]
            if name in vertices:
                raise DecompositionError(f"duplicate vertex {name!r}", lineno, toks[1][1])
            vertices.append(name)
        elif kw == "e" and len(toks) == 3:
            (u, ucol), (v, vcol) = toks[1], toks[2]
            for name, col in ((u, ucol), (v, vcol)):
                if name not in vertices:
                    raise DecompositionError(f"unknown vertex {name!r}", lineno, col)
            if u == v:
                raise DecompositionError(f"self-loop on {u!r}", lineno, ucol)
            if _edge(u, v) in edges:
                raise DecompositionError(f"duplicate edge {u} {v}", lineno, ucol)
            edges.add(_edge(u, v))
        else:
            raise DecompositionError(f"malformed line {raw.strip()!r}", lineno, toks[0][1])
    return ColoredGraph(tuple(vertices), {v: 1 for v in vertices}, frozenset(edges))


def format_graph(G: ColoredGraph) -> str:
    lines = [f"v {v}" for v in G.vertices]
    lines += [f"e {u} {v}" for u, v in G.edge_list()]
    return "\n".join(lines) + "\n"


def make_graph(vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> ColoredGraph:
    vs = tuple(vertices)
    return ColoredGraph(vs, {v: 1 for v in vs}, frozenset(_edge(u, v) for u, v in edges))


# ------------------------------------------------------------------ generators


class _Builder:
    def __init__(self):
        self.nodes: dict[str, Node] = {}
        self._ids = itertools.count(1)

    def _new(self, cls, *args) -> str:
        t = f"n{next(self._ids)}"
        self.nodes[t] = cls(t, *args)
        return t

    def intro(self, v: str, c: int) -> str:
        return self._new(Intro, v, c)

    def union(self, a: str, b: str) -> str:
        return self._new(Union, a, b)

    def recolor(self, t: str, a: int, b: int) -> str:
        return self._new(Recolor, t, a, b)

    def addedges(self, t: str, a: int, b: int) -> str:
        return self._new(AddEdges, t, a, b)

    def build(self, root: str) -> CwDecomposition:
        return CwDecomposition(dict(self.nodes), root)


def gen_path(n: int) -> CwDecomposition:
    """Path v1 - v2 - ... - vn.  The newest vertex carries color 1, older ones color 3."""
    if n < 1:
        raise ValueError("gen_path needs n >= 1")
    b = _Builder()
    t = b.intro("v1", 1)
    for i in range(2, n + 1):
        t = b.union(t, b.intro(f"v{i}", 2))
        t = b.addedges(t, 1, 2)
        t = b.recolor(t, 1, 3)
        t = b.recolor(t, 2, 1)
    return b.build(t)


def gen_clique(n: int) -> CwDecomposition:
    if n < 1:
        raise ValueError("gen_clique needs n >= 1")
    b = _Builder()
    t = b.intro("v1", 1)
    for i in range(2, n + 1):
        t = b.union(t, b.intro(f"v{i}", 2))
        t = b.addedges(t, 1, 2)
        t = b.recolor(t, 2, 1)
    return b.build(t)


def gen_complete_bipartite(p: int, q: int) -> CwDecomposition:
    """K_{p,q} with sides a1..ap and b1..bq."""
    if p < 1 or q < 1:
        raise ValueError("gen_complete_bipartite needs p, q >= 1")
    b = _Builder()
    t = b.intro("a1", 1)
    for i in range(2, p + 1):
        t = b.union(t, b.intro(f"a{i}", 1))
    for j in range(1, q + 1):
        t = b.union(t, b.intro(f"b{j}", 2))
    return b.build(b.addedges(t, 1, 2))


GENERATORS = {
    "path": (gen_path, 1),
    "clique": (gen_clique, 1),
    "biclique": (gen_complete_bipartite, 2),
}
