"""Hand-written monotone cores: k-vertex-cover and k-dominating-set.

Both cores are built once per decomposition; the reachable entry sets are
computed bottom-up in the constructor and the transition relations are kept
per node.
"""

from __future__ import annotations

import itertools
import math

from divcw.engine.dp import DpCore, Entry, solve_single
from divcw.graph import AddEdges, CwDecomposition, Intro, Recolor, Union


class VcCore(DpCore):
    """Entries are per-color counts of cover vertices, (c_1, ..., c_w), with sum <= k."""

    name = "vc"

    def __init__(self, k: int, D: CwDecomposition):
        if k < 0:
            raise ValueError("k must be non-negative")
        super().__init__(D)
        self.k = k
        self.width = D.width
        self.bits = max(1, math.ceil(math.log2(k + 2)))
        self.nbytes = (self.width * self.bits + 7) // 8
        self._process: dict[str, list[tuple[Entry, ...]]] = {}
        self._build()

    def encode(self, counts: tuple[int, ...]) -> Entry:
        x = 0
        for c in counts:
            x = (x << self.bits) | c
        return x.to_bytes(self.nbytes, "big")

    def decode(self, w: Entry) -> tuple[int, ...]:
        x = int.from_bytes(w, "big")
        mask = (1 << self.bits) - 1
        out = [(x >> (self.bits * (self.width - 1 - i))) & mask for i in range(self.width)]
        return tuple(out)

    def _build(self) -> None:
        D, k, w = self.D, self.k, self.width
        n = D.color_counts()
        F: dict[str, set[tuple[int, ...]]] = {}
        for t in D.order:
            node = D.nodes[t]
            if isinstance(node, Intro):
                one = tuple(1 if i == node.color - 1 else 0 for i in range(w))
                empty = (0,) * w
                tuples = [(one,), (empty,)]
            elif isinstance(node, Union):
                tuples = []
                for c1 in F[node.left]:
                    for c2 in F[node.right]:
                        s = tuple(x + y for x, y in zip(c1, c2))
                        if sum(s) <= k:
                            tuples.append((s, c1, c2))
            elif isinstance(node, Recolor):
                tuples = [(_recolor(c, node.a, node.b), c) for c in F[node.child]]
            else:
                na, nb = n[t][node.a - 1], n[t][node.b - 1]
                tuples = [
                    (c, c) for c in F[node.child] if c[node.a - 1] == na or c[node.b - 1] == nb
                ]
            F[t] = {tup[0] for tup in tuples}
            self._process[t] = [tuple(self.encode(c) for c in tup) for tup in tuples]
        self._empty = self.encode((0,) * w)

    def process(self, t: str) -> list[tuple[Entry, ...]]:
        return self._process[t]

    def accept(self) -> frozenset[Entry]:
        return frozenset(
            self.encode(c) for c in itertools.product(range(self.k + 1), repeat=self.width)
        )

    def accepts(self, w: Entry) -> bool:
        return len(w) == self.nbytes and all(c <= self.k for c in self.decode(w))

    def rho(self, w: Entry) -> int:
        if len(w) != self.nbytes:
            raise ValueError(f"not a vc entry: {w!r}")
        return 0 if w == self._empty else 1


def _recolor(c: tuple[int, ...], a: int, b: int) -> tuple[int, ...]:
    if a == b:
        return c
    out = list(c)
    out[b - 1] += out[a - 1]
    out[a - 1] = 0
    return tuple(out)


class DsCore(DpCore):
    """Entries: (count, selected colors, colors holding an undominated vertex)."""

    name = "ds"

    def __init__(self, k: int, D: CwDecomposition):
        if k < 0:
            raise ValueError("k must be non-negative")
        super().__init__(D)
        self.k = k
        self.width = D.width
        self.cbytes = max(1, (k.bit_length() + 7) // 8)
        self.mbytes = (self.width + 7) // 8
        self._process: dict[str, list[tuple[Entry, ...]]] = {}
        self._build()

    def encode(self, state: tuple[int, int, int]) -> Entry:
        count, sel, und = state
        return (
            count.to_bytes(self.cbytes, "big")
            + sel.to_bytes(self.mbytes, "big")
            + und.to_bytes(self.mbytes, "big")
        )

    def decode(self, w: Entry) -> tuple[int, int, int]:
        cb, mb = self.cbytes, self.mbytes
        if len(w) != cb + 2 * mb:
            raise ValueError(f"not a ds entry: {w!r}")
        return (
            int.from_bytes(w[:cb], "big"),
            int.from_bytes(w[cb : cb + mb], "big"),
            int.from_bytes(w[cb + mb :], "big"),
        )

    def _build(self) -> None:
        D, k = self.D, self.k
        F: dict[str, set[tuple[int, int, int]]] = {}
        for t in D.order:
            node = D.nodes[t]
            if isinstance(node, Intro):
                bit = 1 << (node.color - 1)
                tuples = [((1, bit, 0),), ((0, 0, bit),)]
            elif isinstance(node, Union):
                tuples = []
                for s1 in F[node.left]:
                    for s2 in F[node.right]:
                        if s1[0] + s2[0] <= k:
                            tuples.append(((s1[0] + s2[0], s1[1] | s2[1], s1[2] | s2[2]), s1, s2))
            elif isinstance(node, Recolor):
                tuples = [
                    ((s[0], _fold(s[1], node.a, node.b), _fold(s[2], node.a, node.b)), s)
                    for s in F[node.child]
                ]
            else:
                abit, bbit = 1 << (node.a - 1), 1 << (node.b - 1)
                tuples = []
                for s in F[node.child]:
                    count, sel, und = s
                    if sel & abit:
                        und &= ~bbit
                    if sel & bbit:
                        und &= ~abit
                    tuples.append(((count, sel, und), s))
            F[t] = {tup[0] for tup in tuples}
            self._process[t] = [tuple(self.encode(s) for s in tup) for tup in tuples]

    def process(self, t: str) -> list[tuple[Entry, ...]]:
        return self._process[t]

    def accept(self) -> frozenset[Entry]:
        full = 1 << self.width
        return frozenset(
            self.encode((c, sel, 0)) for c in range(self.k + 1) for sel in range(full)
        )

    def accepts(self, w: Entry) -> bool:
        count, _, und = self.decode(w)
        return und == 0 and count <= self.k

    def rho(self, w: Entry) -> int:
        count, _, _ = self.decode(w)
        if count > 1:
            raise ValueError("rho is defined on leaf entries only")
        return count


def _fold(mask: int, a: int, b: int) -> int:
    if a == b:
        return mask
    abit = 1 << (a - 1)
    if mask & abit:
        mask = (mask & ~abit) | (1 << (b - 1))
    return mask


def vc_core(k: int, D: CwDecomposition) -> VcCore:
    return VcCore(k, D)


def ds_core(k: int, D: CwDecomposition) -> DsCore:
    return DsCore(k, D)


def min_vc_size(D: CwDecomposition, k: int) -> int | None:
    """Smallest k' <= k admitting a vertex cover, by ascending search."""
    for kk in range(k + 1):
        if solve_single(vc_core(kk, D)).feasible:
            return kk
    return None


def min_vc(D: CwDecomposition, k: int) -> frozenset[str] | None:
    """A minimum vertex cover if its size is at most k, else None."""
    kk = min_vc_size(D, k)
    if kk is None:
        return None
    return solve_single(vc_core(kk, D)).solution


def minvc_core(k: int, D: CwDecomposition) -> VcCore:
    """Core whose solutions are exactly the minimum vertex covers of size <= k.

    Covers of size at most the cover number are precisely the minimum ones,
    so this is the ordinary cover core with its budget lowered.
    """
    kk = min_vc_size(D, k)
    core = vc_core(k if kk is None else kk, D)
    core.name = "minvc"
    return core
