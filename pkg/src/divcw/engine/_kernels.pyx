# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled max-plus kernels; same contract and visit order as _kernels_py."""

from libc.stdint cimport int64_t

cdef enum:
    MAXR = 16


def join_max(const int64_t[::1] pw, const int64_t[::1] pa, const int64_t[::1] pb,
             const int64_t[::1] offsets, const int64_t[::1] sp, const int64_t[::1] s1,
             const int64_t[::1] s2, const int64_t[::1] L1, const int64_t[::1] L2, int64_t c,
             int64_t[::1] L, int64_t[::1] B1, int64_t[::1] B2):
    cdef Py_ssize_t r = offsets.shape[0] - 1
    cdef Py_ssize_t pos[MAXR]
    cdef int64_t k[MAXR + 1]
    cdef int64_t k1[MAXR + 1]
    cdef int64_t k2[MAXR + 1]
    cdef Py_ssize_t i, changed, p
    cdef int64_t a, b, v
    if r < 1 or r > MAXR:
        raise ValueError("kernel arity out of range")
    for i in range(r):
        if offsets[i] == offsets[i + 1]:
            return
    with nogil:
        for i in range(r):
            pos[i] = offsets[i]
        k[0] = 0
        k1[0] = 0
        k2[0] = 0
        changed = 0
        while True:
            for i in range(changed, r):
                p = pos[i]
                k[i + 1] = k[i] + pw[p] * sp[i]
                k1[i + 1] = k1[i] + pa[p] * s1[i]
                k2[i + 1] = k2[i] + pb[p] * s2[i]
            a = L1[k1[r]]
            b = L2[k2[r]]
            if a >= 0 and b >= 0:
                v = a + b - c
                if v > L[k[r]]:
                    L[k[r]] = v
                    B1[k[r]] = k1[r]
                    B2[k[r]] = k2[r]
            i = r - 1
            pos[i] += 1
            while pos[i] == offsets[i + 1]:
                pos[i] = offsets[i]
                if i == 0:
                    break
                i -= 1
                pos[i] += 1
            if i == 0 and pos[0] == offsets[0]:
                break
            changed = i


def unary_max(const int64_t[::1] pw, const int64_t[::1] pa, const int64_t[::1] offsets,
              const int64_t[::1] sp, const int64_t[::1] s1, const int64_t[::1] L1,
              int64_t[::1] L, int64_t[::1] B1):
    cdef Py_ssize_t r = offsets.shape[0] - 1
    cdef Py_ssize_t pos[MAXR]
    cdef int64_t k[MAXR + 1]
    cdef int64_t k1[MAXR + 1]
    cdef Py_ssize_t i, changed, p
    cdef int64_t v
    if r < 1 or r > MAXR:
        raise ValueError("kernel arity out of range")
    for i in range(r):
        if offsets[i] == offsets[i + 1]:
            return
    with nogil:
        for i in range(r):
            pos[i] = offsets[i]
        k[0] = 0
        k1[0] = 0
        changed = 0
        while True:
            for i in range(changed, r):
                p = pos[i]
                k[i + 1] = k[i] + pw[p] * sp[i]
                k1[i + 1] = k1[i] + pa[p] * s1[i]
            v = L1[k1[r]]
            if v >= 0 and v > L[k[r]]:
                L[k[r]] = v
                B1[k[r]] = k1[r]
            i = r - 1
            pos[i] += 1
            while pos[i] == offsets[i + 1]:
                pos[i] = offsets[i]
                if i == 0:
                    break
                i -= 1
                pos[i] += 1
            if i == 0 and pos[0] == offsets[0]:
                break
            changed = i
