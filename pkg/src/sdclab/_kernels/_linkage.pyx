# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled nearest-record search; bit-identical twin of fallback.py.

Compiled with -O2 only (no fast-math, no fused ops) so the accumulation
matches CPython float arithmetic exactly.
"""

from libc.math cimport fabs, INFINITY

import numpy as np


def nearest_records(a_rows, b_rows, modes, ranges):
    a = np.ascontiguousarray(a_rows, dtype=np.float64)
    b = np.ascontiguousarray(b_rows, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("expected row-major 2-D inputs")
    mode_arr = np.ascontiguousarray(modes, dtype=np.int32)
    range_arr = np.ascontiguousarray(ranges, dtype=np.float64)

    cdef double[:, ::1] av = a
    cdef double[:, ::1] bv = b
    cdef int[::1] mv = mode_arr
    cdef double[::1] rv = range_arr
    cdef Py_ssize_t n_a = av.shape[0]
    cdef Py_ssize_t n_b = bv.shape[0]
    cdef Py_ssize_t m = av.shape[1]

    out_idx = np.empty(n_b, dtype=np.int64)
    out_tie = np.zeros(n_b, dtype=np.uint8)
    cdef long long[::1] oi = out_idx
    cdef unsigned char[::1] ot = out_tie

    cdef Py_ssize_t i, j, k
    cdef double acc, d, best_d, x, y, r
    cdef long long idx
    cdef bint tied

    for j in range(n_b):
        best_d = INFINITY
        idx = -1
        tied = 0
        for i in range(n_a):
            acc = 0.0
            for k in range(m):
                x = bv[j, k]
                y = av[i, k]
                if x != x or y != y:
                    acc += 1.0
                elif mv[k] == 0:
                    acc += 0.0 if x == y else 1.0
                else:
                    r = rv[k]
                    acc += fabs(x - y) / r if r > 0.0 else 0.0
            d = acc / m
            if d < best_d:
                best_d = d
                idx = i
                tied = 0
            elif d == best_d:
                tied = 1
        oi[j] = idx
        ot[j] = tied

    return [int(v) for v in out_idx], [bool(v) for v in out_tie]
