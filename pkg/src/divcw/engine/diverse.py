"""Lifting r monotone cores to the diverse problem.

For each node the lifted table is indexed by r-tuples of reachable entries
(one per core).  Every tuple in the product of the per-core reachable sets
has some witness tuple, so the tables are dense numpy arrays in row-major
order with the first core most significant; linear order is then the
lexicographic order on entry bytes, which fixes tie-breaking.

Sum-type measures keep one best value per cell (max-plus over transitions).
The min-distance variant keeps every distinct vector of capped pairwise
Hamming distances per cell.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from divcw.engine import kernels
from divcw.engine.dp import (
    DpCore,
    NodeTable,
    Witness,
    extract_solution,
    reachable_tables,
    solve_single,
)
from divcw.graph import CwDecomposition
from divcw.measures import UINT64_MAX, VennMeasure, div_min

MAX_CELLS = 50_000_000
_INT64_LIMIT = 2**63 - 1


class TableTooLarge(MemoryError):
    pass


@dataclass
class DiverseResult:
    feasible: bool
    best_value: int | None = None
    solutions: tuple[frozenset[str], ...] | None = None
    witnesses: list[Witness] | None = field(default=None, repr=False)


@dataclass
class _Cells:
    dims: tuple[int, ...]
    strides: tuple[int, ...]
    L: np.ndarray
    B1: np.ndarray | None = None
    B2: np.ndarray | None = None


def _strides(dims: Sequence[int]) -> tuple[int, ...]:
    out = [1] * len(dims)
    for i in range(len(dims) - 2, -1, -1):
        out[i] = out[i + 1] * dims[i + 1]
    return tuple(out)


def _unravel(k: int, cells: _Cells) -> tuple[int, ...]:
    return tuple((k // s) % n for s, n in zip(cells.strides, cells.dims))


def _by_height(D: CwDecomposition) -> list[list[str]]:
    height: dict[str, int] = {}
    for t in D.order:
        height[t] = 1 + max((height[c] for c in D.children(t)), default=-1)
    groups: list[list[str]] = [[] for _ in range(max(height.values()) + 1)]
    for t in D.order:
        groups[height[t]].append(t)
    return groups


def _check_cores(cores: Sequence[DpCore]) -> CwDecomposition:
    if not cores:
        raise ValueError("need at least one core (r >= 1)")
    D = cores[0].D
    for c in cores[1:]:
        if c.D is not D:
            raise ValueError("all cores must be built on the same decomposition")
    return D


class _Lifter:
    def __init__(self, cores: Sequence[DpCore], f: VennMeasure, max_cells: int):
        self.cores = list(cores)
        self.r = len(cores)
        self.D = _check_cores(cores)
        self.f = f
        self.n_vertices = self.D.num_vertices
        self.max_cells = max_cells
        self.tables: list[dict[str, NodeTable]] = [reachable_tables(c) for c in cores]
        self.cells: dict[str, _Cells] = {}

    def _alloc(self, t: str) -> _Cells:
        dims = tuple(len(tab[t].entries) for tab in self.tables)
        size = int(np.prod(dims, dtype=object))
        if size > self.max_cells:
            raise TableTooLarge(f"lifted table at node {t} would have {size} cells")
        L = np.full(size, -1, dtype=np.int64)
        return _Cells(dims, _strides(dims), L)

    def _flat(self, t: str, ncols: int):
        cols = [[] for _ in range(ncols)]
        offsets = [0]
        for tab in self.tables:
            for tup in tab[t].tuples:
                for j in range(ncols):
                    cols[j].append(tup[j])
            offsets.append(len(cols[0]))
        arrs = [np.asarray(col, dtype=np.int64) for col in cols]
        return arrs, np.asarray(offsets, dtype=np.int64)

    def node(self, t: str) -> None:
        D = self.D
        kids = D.children(t)
        cells = self._alloc(t)
        if not kids:
            f, f0 = self.f, self.f.empty_value
            base = (self.n_vertices - 1) * f0
            bits = [
                [core.rho(w) for w in tab[t].entries] for core, tab in zip(self.cores, self.tables)
            ]
            for combo in itertools.product(*(range(n) for n in cells.dims)):
                m = 0
                for i, wi in enumerate(combo):
                    m |= bits[i][wi] << i
                k = sum(wi * s for wi, s in zip(combo, cells.strides))
                cells.L[k] = f(m) + base
        elif len(kids) == 1:
            child = self.cells[kids[0]]
            (pw, pa), offsets = self._flat(t, 2)
            cells.B1 = np.full(cells.L.shape, -1, dtype=np.int64)
            kernels.unary_max(
                pw, pa, offsets, np.asarray(cells.strides, dtype=np.int64),
                np.asarray(child.strides, dtype=np.int64), child.L, cells.L, cells.B1,
            )
        else:
            c1, c2 = self.cells[kids[0]], self.cells[kids[1]]
            (pw, pa, pb), offsets = self._flat(t, 3)
            cells.B1 = np.full(cells.L.shape, -1, dtype=np.int64)
            cells.B2 = np.full(cells.L.shape, -1, dtype=np.int64)
            kernels.join_max(
                pw, pa, pb, offsets,
                np.asarray(cells.strides, dtype=np.int64),
                np.asarray(c1.strides, dtype=np.int64),
                np.asarray(c2.strides, dtype=np.int64),
                c1.L, c2.L, self.n_vertices * self.f.empty_value,
                cells.L, cells.B1, cells.B2,
            )
        self.cells[t] = cells

    def run(self, threads: int = 1) -> None:
        if threads <= 1:
            for t in self.D.order:
                self.node(t)
            return
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for group in _by_height(self.D):
                list(pool.map(self.node, group))

    def best_root(self) -> tuple[int, int] | None:
        root = self.D.root
        cells = self.cells[root]
        accepted = [
            [wi for wi, w in enumerate(tab[root].entries) if core.accepts(w)]
            for core, tab in zip(self.cores, self.tables)
        ]
        best = None
        for combo in itertools.product(*accepted):
            k = sum(wi * s for wi, s in zip(combo, cells.strides))
            v = int(cells.L[k])
            if v >= 0 and (best is None or v > best[1]):
                best = (k, v)
        return best

    def witnesses(self, k_root: int) -> list[Witness]:
        out: list[Witness] = [{} for _ in self.cores]
        stack = [(self.D.root, k_root)]
        while stack:
            t, k = stack.pop()
            cells = self.cells[t]
            for i, wi in enumerate(_unravel(k, cells)):
                out[i][t] = self.tables[i][t].entries[wi]
            kids = self.D.children(t)
            if kids:
                stack.append((kids[0], int(cells.B1[k])))
            if len(kids) == 2:
                stack.append((kids[1], int(cells.B2[k])))
        return out


def diverse_solve(
    cores: Sequence[DpCore],
    f: VennMeasure,
    d: int = 0,
    threads: int = 1,
    max_cells: int = MAX_CELLS,
) -> DiverseResult:
    """Maximise the Venn f-diversity over r-tuples of solutions, one per core.

    Returns the best value over accepting entry tuples together with one
    tuple of solutions attaining it; ``feasible`` is ``best >= d``.
    """
    if f.r != len(cores):
        raise ValueError(f"measure arity {f.r} does not match {len(cores)} cores")
    if d < 0:
        raise ValueError("d must be non-negative")
    D = _check_cores(cores)
    bound = D.num_vertices * max(f.table)
    if bound > UINT64_MAX:
        raise OverflowError(f"diversity bound {bound} exceeds unsigned 64-bit range")
    if 2 * bound > _INT64_LIMIT:
        raise OverflowError(f"diversity bound {bound} exceeds the signed 63-bit working range")
    lifter = _Lifter(cores, f, max_cells)
    lifter.run(threads)
    best = lifter.best_root()
    if best is None:
        return DiverseResult(False)
    k, value = best
    wits = lifter.witnesses(k)
    sols = tuple(extract_solution(core, w) for core, w in zip(cores, wits))
    return DiverseResult(value >= d, value, sols, wits)


def root_key_tuples(cores: Sequence[DpCore]) -> set[tuple[bytes, ...]]:
    """Key tuples present in the lifted root table (every product tuple of reachable entries)."""
    f = VennMeasure(len(cores), tuple([0] * (1 << len(cores))))
    lifter = _Lifter(cores, f, MAX_CELLS)
    lifter.run()
    root = lifter.D.root
    cells = lifter.cells[root]
    keys = set()
    for k in np.flatnonzero(cells.L >= 0):
        idx = _unravel(int(k), cells)
        keys.add(tuple(tab[root].entries[wi] for tab, wi in zip(lifter.tables, idx)))
    return keys


# ---------------------------------------------------------------- min variant


def min_diverse_solve(cores: Sequence[DpCore], d: int) -> DiverseResult:
    """Find r solutions with every pairwise Hamming distance at least d."""
    r = len(cores)
    if r < 2:
        raise ValueError("min-diversity needs r >= 2")
    if d < 0:
        raise ValueError("d must be non-negative")
    D = _check_cores(cores)
    if d == 0:
        singles = [solve_single(c) for c in cores]
        if not all(s.feasible for s in singles):
            return DiverseResult(False)
        sols = tuple(s.solution for s in singles)
        return DiverseResult(True, div_min(sols), sols, [s.witness for s in singles])

    pairs = list(itertools.combinations(range(r), 2))
    tables = [reachable_tables(c) for c in cores]
    # node -> key tuple -> {capped vector: back-pointer}
    lifted: dict[str, dict[tuple[int, ...], dict[tuple[int, ...], tuple]]] = {}
    for t in D.order:
        kids = D.children(t)
        out: dict[tuple[int, ...], dict[tuple[int, ...], tuple]] = {}
        if not kids:
            bits = [[c.rho(w) for w in tab[t].entries] for c, tab in zip(cores, tables)]
            for key in itertools.product(*(range(len(b)) for b in bits)):
                vec = tuple(min(d, int(bits[i][key[i]] != bits[j][key[j]])) for i, j in pairs)
                out.setdefault(key, {})[vec] = ()
        elif len(kids) == 1:
            child = lifted[kids[0]]
            for combo in itertools.product(*(tab[t].tuples for tab in tables)):
                key = tuple(tup[0] for tup in combo)
                ck = tuple(tup[1] for tup in combo)
                slot = out.setdefault(key, {})
                for vec in child.get(ck, ()):
                    slot.setdefault(vec, (ck, vec))
        else:
            left, right = lifted[kids[0]], lifted[kids[1]]
            for combo in itertools.product(*(tab[t].tuples for tab in tables)):
                key = tuple(tup[0] for tup in combo)
                k1 = tuple(tup[1] for tup in combo)
                k2 = tuple(tup[2] for tup in combo)
                if k1 not in left or k2 not in right:
                    continue
                slot = out.setdefault(key, {})
                for v1 in left[k1]:
                    for v2 in right[k2]:
                        vec = tuple(min(d, a + b) for a, b in zip(v1, v2))
                        slot.setdefault(vec, (k1, v1, k2, v2))
        lifted[t] = out

    root = D.root
    target = tuple([d] * len(pairs))
    accepted = [
        [wi for wi, w in enumerate(tab[root].entries) if c.accepts(w)] for c, tab in zip(cores, tables)
    ]
    for key in itertools.product(*accepted):
        if target in lifted[root].get(key, {}):
            wits: list[Witness] = [{} for _ in cores]
            stack = [(root, key, target)]
            while stack:
                t, k, vec = stack.pop()
                for i, wi in enumerate(k):
                    wits[i][t] = tables[i][t].entries[wi]
                back = lifted[t][k][vec]
                kids = D.children(t)
                if len(kids) == 1:
                    stack.append((kids[0], back[0], back[1]))
                elif len(kids) == 2:
                    stack.append((kids[0], back[0], back[1]))
                    stack.append((kids[1], back[2], back[3]))
            sols = tuple(extract_solution(c, w) for c, w in zip(cores, wits))
            return DiverseResult(True, div_min(sols), sols, wits)
    return DiverseResult(False)
