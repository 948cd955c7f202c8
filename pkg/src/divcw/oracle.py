"""Exhaustive ground truth for small instances."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union as TypingUnion

from divcw.graph import ColoredGraph
from divcw.measures import VennMeasure
from divcw.mso.formula import Formula, NaiveEvaluator

MAX_VERTICES = 20
TUPLE_BUDGET = 10**7
MIN = "min"


class OracleRefused(ValueError):
    pass


@dataclass(frozen=True)
class VertexCover:
    k: int


@dataclass(frozen=True)
class MinVertexCover:
    k: int


@dataclass(frozen=True)
class DominatingSet:
    k: int


@dataclass(frozen=True)
class MinimalDominatingSet:
    pass


@dataclass(frozen=True)
class MsoFormula:
    formula: Formula


ProblemSpec = TypingUnion[VertexCover, MinVertexCover, DominatingSet, MinimalDominatingSet, MsoFormula]


def _is_cover(G: ColoredGraph, S: frozenset[str]) -> bool:
    return all(u in S or v in S for u, v in G.edge_list())


def _dominates(G: ColoredGraph, S: frozenset[str]) -> bool:
    return all(v in S or any(u in S for u in G.neighbors(v)) for v in G.vertices)


def _subsets(G: ColoredGraph) -> Iterable[frozenset[str]]:
    verts = sorted(G.vertices)
    for size in range(len(verts) + 1):
        for combo in itertools.combinations(verts, size):
            yield frozenset(combo)


def _sort_key(S: frozenset[str]) -> tuple[str, ...]:
    return tuple(sorted(S))


def brute_solutions(spec: ProblemSpec, G: ColoredGraph) -> list[frozenset[str]]:
    """All S with (G, S) in the problem, sorted by their sorted vertex lists."""
    if G.n > MAX_VERTICES:
        raise OracleRefused(f"oracle refuses graphs with more than {MAX_VERTICES} vertices")
    if isinstance(spec, (VertexCover, DominatingSet, MinVertexCover)) and spec.k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(spec, VertexCover):
        out = [S for S in _subsets(G) if len(S) <= spec.k and _is_cover(G, S)]
    elif isinstance(spec, MinVertexCover):
        covers = [S for S in _subsets(G) if _is_cover(G, S)]
        tau = min(len(S) for S in covers)
        out = [S for S in covers if len(S) == tau and tau <= spec.k]
    elif isinstance(spec, DominatingSet):
        out = [S for S in _subsets(G) if len(S) <= spec.k and _dominates(G, S)]
    elif isinstance(spec, MinimalDominatingSet):
        out = [
            S
            for S in _subsets(G)
            if _dominates(G, S) and not any(_dominates(G, S - {v}) for v in S)
        ]
    elif isinstance(spec, MsoFormula):
        out = NaiveEvaluator(spec.formula, G).solutions()
    else:
        raise TypeError(f"unknown problem spec {spec!r}")
    return sorted(out, key=_sort_key)


def brute_best_diversity(
    lists: Sequence[Sequence[frozenset[str]]],
    objective: VennMeasure | str,
    universe: Iterable[str],
) -> tuple[int | None, tuple[frozenset[str], ...] | None]:
    """Maximum of the objective over the ordered product of the solution lists.

    Candidates are scanned in lexicographic order of list positions and only
    a strict improvement replaces the incumbent, so the first maximiser wins.
    Returns (None, None) when some list is empty.
    """
    universe = sorted(set(universe))
    total = math.prod(len(x) for x in lists)
    if total > TUPLE_BUDGET:
        raise OracleRefused(f"{total} tuples exceed the oracle budget of {TUPLE_BUDGET}")
    members = set(universe)
    for sols in lists:
        for S in sols:
            if not S <= members:
                raise ValueError(f"solution has vertices outside the universe: {sorted(S - members)}")
    if objective == MIN:
        if len(lists) < 2:
            raise ValueError("the min objective needs at least two slots")
        pos = {v: i for i, v in enumerate(universe)}
        masks = [[sum(1 << pos[v] for v in S) for S in sols] for sols in lists]
        pairs = list(itertools.combinations(range(len(lists)), 2))

        def score(idx):
            return min((masks[i][idx[i]] ^ masks[j][idx[j]]).bit_count() for i, j in pairs)

    elif isinstance(objective, VennMeasure):
        if objective.r != len(lists):
            raise ValueError(f"measure arity {objective.r} does not match {len(lists)} slots")
        table = objective.table
        # rows[i][j][v]: contribution of slot i's j-th solution to vertex v's membership index
        rows = [[tuple((1 << i) if v in S else 0 for v in universe) for S in sols] for i, sols in enumerate(lists)]

        def score(idx):
            return sum(table[sum(col)] for col in zip(*(rows[i][j] for i, j in enumerate(idx))))

    else:
        raise ValueError(f"unknown objective {objective!r}")
    best: tuple[int, tuple[int, ...]] | None = None
    for idx in itertools.product(*(range(len(x)) for x in lists)):
        v = score(idx)
        if best is None or v > best[0]:
            best = (v, idx)
    if best is None:
        return None, None
    return best[0], tuple(lists[i][j] for i, j in enumerate(best[1]))
