"""Venn diversity measures stored as explicit truth tables.

A membership vector of length r is encoded as an integer index: bit ``i``
(least significant first) is set iff the vertex lies in the ``i``-th set.
Table files and bitstrings write slot 1 first, e.g. ``1100`` means the vertex
is in the first two sets.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

MAX_ARITY = 16
UINT64_MAX = 2**64 - 1


class MeasureError(ValueError):
    pass


def ones(m: int) -> int:
    return bin(m).count("1")


def membership_index(sets: Sequence[Iterable[str] | frozenset[str]], v: str) -> int:
    m = 0
    for i, s in enumerate(sets):
        if v in s:
            m |= 1 << i
    return m


def bits_to_index(bits: str) -> int:
    """``'1100'`` -> index with slots 1 and 2 set."""
    if any(ch not in "01" for ch in bits):
        raise MeasureError(f"bad membership bitstring {bits!r}")
    return sum(1 << i for i, ch in enumerate(bits) if ch == "1")


def index_to_bits(m: int, r: int) -> str:
    return "".join("1" if m >> i & 1 else "0" for i in range(r))


@dataclass(frozen=True)
class VennMeasure:
    r: int
    table: tuple[int, ...]
    name: str = "custom"

    def __post_init__(self):
        if not 1 <= self.r <= MAX_ARITY:
            raise MeasureError(f"arity must be in [1, {MAX_ARITY}], got {self.r}")
        if len(self.table) != 1 << self.r:
            raise MeasureError(f"table needs {1 << self.r} entries, got {len(self.table)}")
        for x in self.table:
            if not 0 <= x <= UINT64_MAX:
                raise MeasureError(f"table value {x} outside unsigned 64-bit range")

    def __call__(self, m: int) -> int:
        return self.table[m]

    @property
    def empty_value(self) -> int:
        """f(0^r): the influence of a vertex in none of the sets."""
        return self.table[0]

    def to_text(self) -> str:
        rows = [f"r {self.r}"]
        rows += [f"{index_to_bits(m, self.r)} {v}" for m, v in enumerate(self.table)]
        return "\n".join(rows) + "\n"


def divsum_as_venn(r: int) -> VennMeasure:
    """Sum of pairwise Hamming distances as a Venn measure: ones(m) * zeros(m)."""
    return VennMeasure(r, tuple(ones(m) * (r - ones(m)) for m in range(1 << r)), "sum")


def divstar(r: int) -> VennMeasure:
    return VennMeasure(r, tuple(r * r - ones(m) ** 2 for m in range(1 << r)), "star")


def random_measure(r: int, rng: random.Random, max_value: int = 10) -> VennMeasure:
    return VennMeasure(r, tuple(rng.randint(0, max_value) for _ in range(1 << r)), "random")


def parse_measure(text: str) -> VennMeasure:
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0][0] != "r" or len(lines[0]) != 2:
        raise MeasureError("measure file must start with 'r <arity>'")
    try:
        r = int(lines[0][1])
    except ValueError:
        raise MeasureError(f"bad arity {lines[0][1]!r}") from None
    if not 1 <= r <= MAX_ARITY:
        raise MeasureError(f"arity must be in [1, {MAX_ARITY}], got {r}")
    table: dict[int, int] = {}
    for row in lines[1:]:
        if len(row) != 2 or len(row[0]) != r:
            raise MeasureError(f"bad measure row {' '.join(row)!r}")
        m = bits_to_index(row[0])
        if m in table:
            raise MeasureError(f"duplicate row {row[0]}")
        try:
            table[m] = int(row[1])
        except ValueError:
            raise MeasureError(f"bad value {row[1]!r}") from None
    missing = [index_to_bits(m, r) for m in range(1 << r) if m not in table]
    if missing:
        raise MeasureError(f"missing rows: {', '.join(missing[:8])}")
    return VennMeasure(r, tuple(table[m] for m in range(1 << r)))


def hamming(S: Iterable[str], T: Iterable[str]) -> int:
    return len(set(S) ^ set(T))


def venn_div(f: VennMeasure, sets: Sequence[Iterable[str]], universe: Iterable[str]) -> int:
    sets = [frozenset(s) for s in sets]
    if len(sets) != f.r:
        raise MeasureError(f"measure arity {f.r} but {len(sets)} sets given")
    universe = list(universe)
    members = set(universe)
    for s in sets:
        if not s <= members:
            raise MeasureError(f"set contains vertices outside the universe: {sorted(s - members)}")
    total = sum(f.table[membership_index(sets, v)] for v in universe)
    if total > UINT64_MAX:
        raise OverflowError(f"diversity {total} exceeds unsigned 64-bit range")
    return total


def div_sum(sets: Sequence[Iterable[str]]) -> int:
    sets = [frozenset(s) for s in sets]
    return sum(len(a ^ b) for a, b in combinations(sets, 2))


def div_min(sets: Sequence[Iterable[str]]) -> int:
    sets = [frozenset(s) for s in sets]
    if len(sets) < 2:
        raise MeasureError("div_min needs at least two sets")
    return min(len(a ^ b) for a, b in combinations(sets, 2))
