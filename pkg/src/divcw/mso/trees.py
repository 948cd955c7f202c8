"""Reduced partial evaluation trees, hash-consed in an arena.

A partial evaluation tree for a prenex formula over the graph G_t branches on
every quantified variable in prefix order.  Individual variables get one
extra branch, ``EXT``, for a value outside G_t.  Leaves carry a
configuration: the subgraph induced by the assigned vertices, their colors,
and the variable assignments restricted to them.

Configurations are canonical because vertices are identified by the first
individual variable assigned to them (the *representative*):

    reps    per individual variable j: index of its representative, or EXT
    colors  per individual variable j: color of its vertex (0 when EXT)
    adj     bitmask over representative pairs (i, j), i < j, bit i*q_v + j
    sets    per set variable: bitmask over representatives in that set

Two subtrees at the same level are isomorphic iff they have the same set of
child classes, so an inner class is interned by its sorted child ids.  Each
class also gets a structural digest (children digests sorted), which is
independent of arena insertion order and is what entries expose.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterable, Sequence

from divcw.graph import ColoredGraph
from divcw.mso.formula import EXISTS, SET, Adj, Eq, Formula, In, compile_matrix

EXT = -1
MAX_QUANTIFIERS = 6
DEFAULT_BUDGET = 2_000_000


class ArenaBudgetExceeded(MemoryError):
    pass


@dataclass(frozen=True)
class Configuration:
    reps: tuple[int, ...]
    colors: tuple[int, ...]
    adj: int
    sets: tuple[int, ...]

    def key(self) -> bytes:
        return repr((self.reps, self.colors, self.adj, self.sets)).encode()

    @property
    def ext_mask(self) -> int:
        return sum(1 << j for j, r in enumerate(self.reps) if r == EXT)

    def compatible(self, other: "Configuration") -> bool:
        return all(a == EXT or b == EXT for a, b in zip(self.reps, other.reps))

    def union(self, other: "Configuration") -> "Configuration":
        """Disjoint union of configurations from vertex-disjoint graphs."""
        reps = []
        colors = []
        for j, (a, b) in enumerate(zip(self.reps, other.reps)):
            if a != EXT and b != EXT:
                raise ValueError(f"incompatible configurations at individual variable {j}")
            if a != EXT:
                reps.append(a)
                colors.append(self.colors[j])
            else:
                reps.append(b)
                colors.append(other.colors[j])
        return Configuration(
            tuple(reps),
            tuple(colors),
            self.adj | other.adj,
            tuple(x | y for x, y in zip(self.sets, other.sets)),
        )

    def recolor(self, a: int, b: int) -> "Configuration":
        if a == b or a not in self.colors:
            return self
        return Configuration(
            self.reps, tuple(b if c == a else c for c in self.colors), self.adj, self.sets
        )

    def add_edges(self, a: int, b: int) -> "Configuration":
        qv = len(self.reps)
        adj = self.adj
        heads = [j for j, r in enumerate(self.reps) if r == j]
        for x in range(len(heads)):
            for y in range(x + 1, len(heads)):
                i, j = heads[x], heads[y]
                ci, cj = self.colors[i], self.colors[j]
                if (ci == a and cj == b) or (ci == b and cj == a):
                    adj |= 1 << (i * qv + j)
        if adj == self.adj:
            return self
        return Configuration(self.reps, self.colors, adj, self.sets)


def configuration_of(
    ind_values: Sequence[str | None],
    set_values: Sequence[Iterable[str]],
    G: ColoredGraph,
) -> Configuration:
    """Configuration of a full assignment over G (None = external)."""
    qv = len(ind_values)
    reps = []
    for j, v in enumerate(ind_values):
        if v is None:
            reps.append(EXT)
        else:
            reps.append(next(i for i in range(j + 1) if ind_values[i] == v))
    colors = tuple(0 if v is None else G.colors[v] for v in ind_values)
    adj = 0
    heads = [j for j, r in enumerate(reps) if r == j]
    for x in range(len(heads)):
        for y in range(x + 1, len(heads)):
            i, j = heads[x], heads[y]
            if G.adjacent(ind_values[i], ind_values[j]):
                adj |= 1 << (i * qv + j)
    sets = []
    for S in set_values:
        S = set(S)
        sets.append(sum(1 << j for j in heads if ind_values[j] in S))
    return Configuration(tuple(reps), colors, adj, tuple(sets))


class TreeArena:
    """Hash-consing store of reduced partial evaluation tree classes for one formula."""

    def __init__(self, phi: Formula, budget: int = DEFAULT_BUDGET):
        if phi.q > MAX_QUANTIFIERS:
            raise ArenaBudgetExceeded(
                f"formula has {phi.q} quantifiers; at most {MAX_QUANTIFIERS} are supported"
            )
        self.phi = phi
        self.q = phi.q
        self.qv = phi.q_v
        self.budget = budget
        # per prefix position: (is_set, index within its sort, is_exists)
        self.slots: list[tuple[bool, int, bool]] = []
        counts = {True: 0, False: 0}
        for quant in phi.prefix:
            is_set = quant.sort == SET
            self.slots.append((is_set, counts[is_set], quant.kind == EXISTS))
            counts[is_set] += 1
        # individual variables fixed by the first l prefix positions
        self.prefix_mask = [0]
        for is_set, idx, _ in self.slots:
            self.prefix_mask.append(self.prefix_mask[-1] | (0 if is_set else 1 << idx))

        self.level: list[int] = []
        self.children: list[tuple[int, ...]] = []
        self.config: list[Configuration | None] = []
        self.ext_mask: list[int] = []
        self.digest: list[bytes] = []
        self._leaf_ids: dict[Configuration, int] = {}
        self._inner_ids: dict[tuple[int, tuple[int, ...]], int] = {}
        self._product_memo: dict[tuple[int, int], int] = {}
        self._op_memo: dict[tuple, dict[int, int]] = {}
        self._eval_memo: dict[int, bool] = {}
        self._matrix = self._compile()

    def __len__(self) -> int:
        return len(self.level)

    # -------------------------------------------------------------- interning

    def _check_budget(self) -> None:
        if len(self.level) >= self.budget:
            raise ArenaBudgetExceeded(f"tree arena exceeded its budget of {self.budget} classes")

    def leaf(self, cfg: Configuration) -> int:
        tid = self._leaf_ids.get(cfg)
        if tid is not None:
            return tid
        self._check_budget()
        tid = len(self.level)
        self.level.append(self.q)
        self.children.append(())
        self.config.append(cfg)
        self.ext_mask.append(cfg.ext_mask)
        self.digest.append(hashlib.blake2b(b"L" + cfg.key(), digest_size=16).digest())
        self._leaf_ids[cfg] = tid
        return tid

    def inner(self, level: int, kids: Iterable[int]) -> int:
        kids = tuple(sorted(set(kids)))
        if not kids:
            raise ValueError("inner tree node without children")
        key = (level, kids)
        tid = self._inner_ids.get(key)
        if tid is not None:
            return tid
        self._check_budget()
        tid = len(self.level)
        self.level.append(level)
        self.children.append(kids)
        self.config.append(None)
        self.ext_mask.append(self.ext_mask[kids[0]] & self.prefix_mask[level])
        body = b"".join(sorted(self.digest[k] for k in kids))
        self.digest.append(hashlib.blake2b(b"N" + bytes([level]) + body, digest_size=16).digest())
        self._inner_ids[key] = tid
        return tid

    # -------------------------------------------------------------- structure

    def ext_child(self, tid: int) -> int:
        """The external branch of a node that branches on an individual variable."""
        is_set, idx, _ = self.slots[self.level[tid]]
        assert not is_set
        found = [c for c in self.children[tid] if self.ext_mask[c] >> idx & 1]
        assert len(found) == 1, "individual branching must have exactly one external child"
        return found[0]

    def size(self, tid: int) -> int:
        """Number of nodes of the (reduced) tree rooted at tid, counting shared classes per use."""
        memo: dict[int, int] = {}

        def go(t: int) -> int:
            if t not in memo:
                memo[t] = 1 + sum(go(c) for c in self.children[t])
            return memo[t]

        return go(tid)

    # -------------------------------------------------------------- builders

    def leaf_tree(self, color: int, level: int = 0, first_set: bool | None = None) -> int:
        """Reduced partial tree of the one-vertex graph, rooted at ``level``.

        ``first_set`` fixes whether the vertex is in the set chosen at prefix
        position 0 when building from level 1.
        """
        nsets = self.q - self.qv
        ind = [False] * self.qv
        sets = [False] * nsets
        if level > 0:
            if first_set is None or not self.slots[0][0]:
                raise ValueError("building below level 0 needs a fixed first set choice")
            sets[0] = first_set

        def build(pos: int) -> int:
            if pos == self.q:
                head = next((j for j in range(self.qv) if ind[j]), None)
                reps = tuple(head if ind[j] else EXT for j in range(self.qv))
                colors = tuple(color if ind[j] else 0 for j in range(self.qv))
                smask = tuple((1 << head) if (head is not None and s) else 0 for s in sets)
                return self.leaf(Configuration(reps, colors, 0, smask))
            is_set, idx, _ = self.slots[pos]
            kids = []
            target = sets if is_set else ind
            for choice in (False, True):
                target[idx] = choice
                kids.append(build(pos + 1))
            target[idx] = False
            return self.inner(pos, kids)

        return build(level)

    def product(self, a: int, b: int) -> int:
        """Reduced tree product of two classes at the same level over disjoint graphs."""
        if a > b:
            a, b = b, a
        key = (a, b)
        hit = self._product_memo.get(key)
        if hit is not None:
            return hit
        lvl = self.level[a]
        if lvl != self.level[b]:
            raise ValueError("tree product of classes at different levels")
        if lvl == self.q:
            out = self.leaf(self.config[a].union(self.config[b]))
        else:
            is_set, _, _ = self.slots[lvl]
            if is_set:
                kids = {self.product(x, y) for x in self.children[a] for y in self.children[b]}
            else:
                ea, eb = self.ext_child(a), self.ext_child(b)
                kids = {self.product(ea, eb)}
                kids.update(self.product(x, eb) for x in self.children[a] if x != ea)
                kids.update(self.product(ea, y) for y in self.children[b] if y != eb)
            out = self.inner(lvl, kids)
        self._product_memo[key] = out
        return out

    def _rewrite(self, tid: int, op: tuple) -> int:
        memo = self._op_memo.setdefault(op, {})
        hit = memo.get(tid)
        if hit is not None:
            return hit
        if self.level[tid] == self.q:
            cfg = self.config[tid]
            new = cfg.recolor(op[1], op[2]) if op[0] == "recolor" else cfg.add_edges(op[1], op[2])
            out = self.leaf(new)
        else:
            out = self.inner(self.level[tid], (self._rewrite(c, op) for c in self.children[tid]))
        memo[tid] = out
        return out

    def recolor(self, tid: int, a: int, b: int) -> int:
        return self._rewrite(tid, ("recolor", a, b))

    def add_edges(self, tid: int, a: int, b: int) -> int:
        return self._rewrite(tid, ("addedges", a, b))

    # -------------------------------------------------------------- evaluation

    def _compile(self):
        ind_index = {}
        set_index = {}
        for quant, (is_set, idx, _) in zip(self.phi.prefix, self.slots):
            (set_index if is_set else ind_index)[quant.name] = idx
        qv = self.qv

        def atom(a):
            if isinstance(a, Adj):
                x, y = ind_index[a.x], ind_index[a.y]

                def adj(cfg: Configuration) -> bool:
                    i, j = cfg.reps[x], cfg.reps[y]
                    if i == j:
                        return False
                    if i > j:
                        i, j = j, i
                    return bool(cfg.adj >> (i * qv + j) & 1)

                return adj
            if isinstance(a, Eq):
                x, y = ind_index[a.x], ind_index[a.y]
                return lambda cfg: cfg.reps[x] == cfg.reps[y]
            assert isinstance(a, In)
            x, s = ind_index[a.x], set_index[a.s]
            return lambda cfg: bool(cfg.sets[s] >> cfg.reps[x] & 1)

        return compile_matrix(self.phi.matrix, atom)

    def evaluate(self, tid: int) -> bool:
        """Truth value of the tree with every external branch pruned."""
        hit = self._eval_memo.get(tid)
        if hit is not None:
            return hit
        lvl = self.level[tid]
        if lvl == self.q:
            cfg = self.config[tid]
            assert cfg.ext_mask == 0, "evaluated a leaf with external variables"
            out = bool(self._matrix(cfg))
        else:
            is_set, idx, exists = self.slots[lvl]
            kids = self.children[tid]
            if not is_set:
                kids = [c for c in kids if not self.ext_mask[c] >> idx & 1]
            if exists:
                out = any(self.evaluate(c) for c in kids)
            else:
                out = all(self.evaluate(c) for c in kids)
        self._eval_memo[tid] = out
        return out

    # -------------------------------------------------------------- unreduced trees

    def reduce(self, tree: "FullTree") -> int:
        """Intern an explicit (unreduced) tree bottom-up."""
        if tree.config is not None:
            return self.leaf(tree.config)
        return self.inner(tree.level, (self.reduce(c) for _, c in tree.children))

    def expand(self, tid: int) -> "FullTree":
        """Explicit tree of a class (children unlabeled)."""
        if self.level[tid] == self.q:
            return FullTree(self.q, (), self.config[tid])
        return FullTree(self.level[tid], tuple((None, self.expand(c)) for c in self.children[tid]))


@dataclass(frozen=True)
class FullTree:
    """Explicit partial evaluation tree.  Children are (label, subtree) pairs."""

    level: int
    children: tuple[tuple[object, "FullTree"], ...]
    config: Configuration | None = None

    def size(self) -> int:
        return 1 + sum(c.size() for _, c in self.children)


def full_partial_tree(phi: Formula, G: ColoredGraph, level: int = 0, fixed: dict | None = None) -> FullTree:
    """The unreduced partial evaluation tree of phi over G (exponential; tests only).

    ``fixed`` pre-assigns prefix positions below ``level`` (position -> value).
    """
    verts = sorted(G.vertices)
    prefix = phi.prefix
    values: list = [None] * len(prefix)
    for pos, val in (fixed or {}).items():
        values[pos] = val

    def build(pos: int) -> FullTree:
        if pos == len(prefix):
            ind = [values[i] for i, p in enumerate(prefix) if p.sort != SET]
            sets = [values[i] or () for i, p in enumerate(prefix) if p.sort == SET]
            return FullTree(pos, (), configuration_of(ind, sets, G))
        kids = []
        if prefix[pos].sort == SET:
            for bits in cartesian((False, True), repeat=len(verts)):
                S = frozenset(v for v, b in zip(verts, bits) if b)
                values[pos] = S
                kids.append((S, build(pos + 1)))
        else:
            for v in [None] + verts:
                values[pos] = v
                kids.append(("ext" if v is None else v, build(pos + 1)))
        values[pos] = None
        return FullTree(pos, tuple(kids))

    return build(level)


def full_product(phi: Formula, t1: FullTree, t2: FullTree) -> FullTree:
    """Tree product of explicit partial trees over vertex-disjoint graphs."""
    if t1.config is not None:
        return FullTree(t1.level, (), t1.config.union(t2.config))
    if phi.prefix[t1.level].sort == SET:
        kids = [
            (S | P, full_product(phi, c1, c2)) for S, c1 in t1.children for P, c2 in t2.children
        ]
    else:
        e1 = next(c for lab, c in t1.children if lab == "ext")
        e2 = next(c for lab, c in t2.children if lab == "ext")
        kids = [("ext", full_product(phi, e1, e2))]
        kids += [(lab, full_product(phi, c, e2)) for lab, c in t1.children if lab != "ext"]
        kids += [(lab, full_product(phi, e1, c)) for lab, c in t2.children if lab != "ext"]
    return FullTree(t1.level, tuple(kids))


def evaluate_full(phi: Formula, tree: FullTree, arena: TreeArena) -> bool:
    """Evaluate an explicit tree with external branches pruned."""
    if tree.config is not None:
        return bool(arena._matrix(tree.config))
    quant = phi.prefix[tree.level]
    kids = [c for lab, c in tree.children if lab != "ext"]
    results = (evaluate_full(phi, c, arena) for c in kids)
    return any(results) if quant.kind == EXISTS else all(results)
