"""Model checking over a decomposition and the MSO-derived monotone core."""

from __future__ import annotations

from divcw.engine.dp import DpCore, Entry
from divcw.graph import AddEdges, CwDecomposition, Intro, Recolor, Union
from divcw.mso.formula import Formula, FormulaError, const_value, parse_formula
from divcw.mso.trees import DEFAULT_BUDGET, TreeArena


def _as_formula(phi: Formula | str) -> Formula:
    return parse_formula(phi) if isinstance(phi, str) else phi


def root_tree(phi: Formula, D: CwDecomposition, arena: TreeArena) -> int:
    """Reduced level-0 tree class of the whole decomposed graph."""
    tree: dict[str, int] = {}
    for t in D.order:
        node = D.nodes[t]
        if isinstance(node, Intro):
            tree[t] = arena.leaf_tree(node.color)
        elif isinstance(node, Union):
            tree[t] = arena.product(tree[node.left], tree[node.right])
        elif isinstance(node, Recolor):
            tree[t] = arena.recolor(tree[node.child], node.a, node.b)
        else:
            tree[t] = arena.add_edges(tree[node.child], node.a, node.b)
    return tree[D.root]


def model_check(phi: Formula | str, D: CwDecomposition, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether the graph built by D satisfies the closed prenex formula phi."""
    phi = _as_formula(phi)
    if phi.q_v == 0:
        return const_value(phi.matrix)
    arena = TreeArena(phi, budget)
    return arena.evaluate(root_tree(phi, D, arena))


class MsoCore(DpCore):
    """Entries are level-1 tree classes (the solution set already chosen).

    At decomposition leaves the entry also carries the solution bit, so that
    the two choices for the introduced vertex stay distinguishable.
    """

    name = "mso"

    def __init__(self, phi: Formula | str, D: CwDecomposition, budget: int = DEFAULT_BUDGET):
        phi = _as_formula(phi)
        if not phi.is_vertex_problem():
            raise FormulaError("the first quantifier must be 'exists set' (the solution set)")
        if phi.q_v < 1:
            raise FormulaError("a vertex-problem formula needs at least one vertex quantifier")
        super().__init__(D)
        self.phi = phi
        self.arena = TreeArena(phi, budget)
        self._tid: dict[Entry, int] = {}
        self._process: dict[str, list[tuple[Entry, ...]]] = {}
        self._build()

    def _entry(self, tid: int, tag: int | None = None) -> Entry:
        digest = self.arena.digest[tid]
        w = b"T" + digest if tag is None else b"L" + bytes([tag]) + digest
        self._tid[w] = tid
        return w

    def _build(self) -> None:
        arena, D = self.arena, self.D
        F: dict[str, list[Entry]] = {}
        for t in D.order:
            node = D.nodes[t]
            if isinstance(node, Intro):
                tuples = [
                    (self._entry(arena.leaf_tree(node.color, 1, bool(tag)), tag),)
                    for tag in (0, 1)
                ]
            elif isinstance(node, Union):
                tuples = []
                for w1 in F[node.left]:
                    for w2 in F[node.right]:
                        tid = arena.product(self._tid[w1], self._tid[w2])
                        tuples.append((self._entry(tid), w1, w2))
            else:
                op = arena.recolor if isinstance(node, Recolor) else arena.add_edges
                assert isinstance(node, (Recolor, AddEdges))
                tuples = [
                    (self._entry(op(self._tid[w], node.a, node.b)), w) for w in F[node.child]
                ]
            F[t] = sorted({tup[0] for tup in tuples})
            self._process[t] = tuples
        self._accept = frozenset(
            w for w in F[D.root] if self.arena.evaluate(self._tid[w])
        )

    def process(self, t: str) -> list[tuple[Entry, ...]]:
        return self._process[t]

    def accept(self) -> frozenset[Entry]:
        return self._accept

    def rho(self, w: Entry) -> int:
        if len(w) < 2 or w[:1] != b"L":
            raise ValueError("rho is defined on leaf entries only")
        return w[1]


def mso_core(phi: Formula | str, D: CwDecomposition, budget: int = DEFAULT_BUDGET) -> MsoCore:
    return MsoCore(phi, D, budget)
