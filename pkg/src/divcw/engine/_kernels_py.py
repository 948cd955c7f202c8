"""Pure-Python max-plus kernels for the diversity lifting.

Both functions walk the r-fold product of per-core transition lists in
lexicographic order (first core most significant) and keep, for every
parent cell, the first candidate reaching the maximum.  The compiled
version in ``_kernels.pyx`` must visit candidates in the same order.

Array layout (all int64):
  offsets[i]:offsets[i+1]  slice of the flat transition arrays for core i
  pw, pa, pb               parent / first child / second child entry indices
  sp, s1, s2               per-core strides of the parent and child tables
  L1, L2                   child tables (best value per cell, -1 = absent)
  L, B1, B2                output table and back-pointers (child cell index)
"""

from __future__ import annotations

import itertools

import numpy as np


def _slices(offsets, *cols_and_strides):
    r = len(offsets) - 1
    per_core = []
    for i in range(r):
        lo, hi = int(offsets[i]), int(offsets[i + 1])
        rows = []
        for j in range(lo, hi):
            rows.append(tuple(int(col[j]) * int(stride[i]) for col, stride in cols_and_strides))
        per_core.append(rows)
    return per_core


def join_max(pw, pa, pb, offsets, sp, s1, s2, L1, L2, c, L, B1, B2) -> None:
    per_core = _slices(offsets, (pw, sp), (pa, s1), (pb, s2))
    l1 = L1.tolist()
    l2 = L2.tolist()
    best = L.tolist()
    b1 = B1.tolist()
    b2 = B2.tolist()
    c = int(c)
    for combo in itertools.product(*per_core):
        k = k1 = k2 = 0
        for x, y, z in combo:
            k += x
            k1 += y
            k2 += z
        a, b = l1[k1], l2[k2]
        if a < 0 or b < 0:
            continue
        v = a + b - c
        if v > best[k]:
            best[k] = v
            b1[k] = k1
            b2[k] = k2
    L[:] = np.asarray(best, dtype=np.int64)
    B1[:] = np.asarray(b1, dtype=np.int64)
    B2[:] = np.asarray(b2, dtype=np.int64)


def unary_max(pw, pa, offsets, sp, s1, L1, L, B1) -> None:
    per_core = _slices(offsets, (pw, sp), (pa, s1))
    l1 = L1.tolist()
    best = L.tolist()
    b1 = B1.tolist()
    for combo in itertools.product(*per_core):
        k = k1 = 0
        for x, y in combo:
            k += x
            k1 += y
        v = l1[k1]
        if v < 0:
            continue
        if v > best[k]:
            best[k] = v
            b1[k] = k1
    L[:] = np.asarray(best, dtype=np.int64)
    B1[:] = np.asarray(b1, dtype=np.int64)
