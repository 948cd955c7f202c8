"""Dynamic-programming cores and single-solution solving.

A core supplies, for every decomposition node ``t``, a transition relation
``process(t)``: tuples ``(w, w_1, ..., w_k)`` of entries (canonical byte
strings) saying that entry ``w`` at ``t`` can be derived from entries
``w_i`` at the children.  The set of entries reachable at a node is built
bottom-up; a witness is one consistent assignment of entries to nodes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from divcw.graph import CwDecomposition, Intro

Entry = bytes
Witness = dict  # node id -> Entry


class CoreContractError(RuntimeError):
    """A core violated its interface (bad arity, rho undefined, ...)."""


class DpCore:
    """Base class for dynamic-programming cores over a fixed decomposition."""

    name = "core"

    def __init__(self, D: CwDecomposition):
        self.D = D

    def process(self, t: str) -> list[tuple[Entry, ...]]:
        raise NotImplementedError

    def accept(self) -> frozenset[Entry]:
        raise NotImplementedError

    def accepts(self, w: Entry) -> bool:
        return w in self.accept()

    def rho(self, w: Entry) -> int:
        raise NotImplementedError


@dataclass
class NodeTable:
    """Reachable entries at one node and the transitions that produce them.

    ``entries`` is sorted by bytes; ``tuples`` holds index tuples
    ``(w, c_1, ..., c_k)`` into this node's and the children's entry lists,
    sorted lexicographically.
    """

    entries: list[Entry]
    index: dict[Entry, int]
    tuples: list[tuple[int, ...]]


def reachable_tables(core: DpCore) -> dict[str, NodeTable]:
    """Bottom-up construction of the reachable entry sets (Pi) for every node."""
    D = core.D
    tables: dict[str, NodeTable] = {}
    for t in D.order:
        kids = D.children(t)
        child_idx = [tables[c].index for c in kids]
        raw = []
        for tup in core.process(t):
            if len(tup) != len(kids) + 1:
                raise CoreContractError(
                    f"{core.name}: process tuple of arity {len(tup)} at node {t} with {len(kids)} children"
                )
            if all(w in idx for w, idx in zip(tup[1:], child_idx)):
                raw.append(tup)
        entries = sorted({tup[0] for tup in raw})
        index = {w: i for i, w in enumerate(entries)}
        tuples = sorted(
            {(index[tup[0]],) + tuple(idx[w] for w, idx in zip(tup[1:], child_idx)) for tup in raw}
        )
        tables[t] = NodeTable(entries, index, tuples)
    return tables


def _first_derivation(table: NodeTable, wi: int) -> tuple[int, ...]:
    # tuples are sorted, so a linear scan finds the lexicographically first
    for tup in table.tuples:
        if tup[0] == wi:
            return tup[1:]
    raise CoreContractError("entry without derivation")


def reconstruct_witness(core: DpCore, tables: dict[str, NodeTable], w: Entry) -> Witness:
    D = core.D
    witness: Witness = {}
    stack = [(D.root, tables[D.root].index[w])]
    while stack:
        t, wi = stack.pop()
        table = tables[t]
        witness[t] = table.entries[wi]
        kids = D.children(t)
        if kids:
            for c, ci in zip(kids, _first_derivation(table, wi)):
                stack.append((c, ci))
    return witness


@dataclass
class SingleResult:
    feasible: bool
    witness: Witness | None = None
    solution: frozenset[str] | None = None


def solve_single(core: DpCore) -> SingleResult:
    """Decide feasibility; on success return the lexicographically first witness."""
    tables = reachable_tables(core)
    root = tables[core.D.root]
    for w in root.entries:
        if core.accepts(w):
            witness = reconstruct_witness(core, tables, w)
            return SingleResult(True, witness, extract_solution(core, witness))
    return SingleResult(False)


def extract_solution(core: DpCore, witness: Witness) -> frozenset[str]:
    """Vertices whose intro-node entry has membership bit 1."""
    chosen = []
    for t in core.D.order:
        node = core.D.nodes[t]
        if isinstance(node, Intro):
            try:
                bit = core.rho(witness[t])
            except (KeyError, ValueError) as exc:
                raise CoreContractError(f"{core.name}: rho undefined on leaf entry at {t}") from exc
            if bit not in (0, 1):
                raise CoreContractError(f"{core.name}: rho returned {bit!r}")
            if bit:
                chosen.append(node.vertex)
    return frozenset(chosen)


def iter_witnesses(
    core: DpCore, tables: dict[str, NodeTable] | None = None, accepting_only: bool = True
) -> Iterator[Witness]:
    """Enumerate every witness.  Exponential; meant for small instances."""
    tables = tables if tables is not None else reachable_tables(core)
    D = core.D

    def below(t: str, wi: int) -> Iterator[dict[str, Entry]]:
        table = tables[t]
        kids = D.children(t)
        here = table.entries[wi]
        if not kids:
            yield {t: here}
            return
        for tup in table.tuples:
            if tup[0] != wi:
                continue
            parts = [list(below(c, ci)) for c, ci in zip(kids, tup[1:])]
            for combo in itertools.product(*parts):
                alpha = {t: here}
                for part in combo:
                    alpha.update(part)
                yield alpha

    root = tables[D.root]
    for wi, w in enumerate(root.entries):
        if accepting_only and not core.accepts(w):
            continue
        yield from below(D.root, wi)


def witness_solutions(core: DpCore) -> set[frozenset[str]]:
    """All sets S_rho(D, alpha) over accepting witnesses alpha."""
    return {extract_solution(core, alpha) for alpha in iter_witnesses(core)}


def check_witness(core: DpCore, witness: Witness) -> bool:
    """True iff every node's tuple is a process tuple and the root entry is accepting."""
    D = core.D
    for t in D.order:
        tup = (witness[t],) + tuple(witness[c] for c in D.children(t))
        if tup not in set(core.process(t)):
            return False
    return core.accepts(witness[D.root])
