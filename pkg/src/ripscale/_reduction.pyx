# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
# distutils: language = c++
"""Compiled boundary-matrix reduction kernel.

Same algorithm and contract as ``_reduction_py.reduce_boundary``; columns
live in C++ vectors so the inner XOR-merge loop runs without interpreter
overhead.
"""

from libcpp.vector cimport vector

import numpy as np

cimport numpy as cnp

cnp.import_array()


def reduce_boundary(col_ptr, rows):
    """See ``ripscale._reduction_py.reduce_boundary`` for the contract."""
    cdef cnp.int64_t[::1] cp = np.ascontiguousarray(col_ptr, dtype=np.int64)
    cdef cnp.int32_t[::1] rw = np.ascontiguousarray(rows, dtype=np.int32)
    cdef Py_ssize_t n = cp.shape[0] - 1
    kills_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] kills = kills_arr

    cdef vector[vector[int]] cols
    cdef vector[int] low_to_col
    cdef vector[int] merged
    cols.resize(n)
    low_to_col.assign(n, -1)

    cdef Py_ssize_t j
    cdef cnp.int64_t a, b
    cdef int low, k
    cdef size_t ia, ib, na, nb

    for j in range(n):
        a = cp[j]
        b = cp[j + 1]
        cols[j].reserve(b - a)
        while a < b:
            cols[j].push_back(rw[a])
            a += 1

    for j in range(n):
        while cols[j].size() > 0:
            low = cols[j].back()
            k = low_to_col[low]
            if k < 0:
                low_to_col[low] = <int> j
                kills[j] = low
                break
            # cols[j] ^= cols[k]: symmetric difference of ascending lists
            merged.clear()
            ia = 0
            ib = 0
            na = cols[j].size()
            nb = cols[k].size()
            while ia < na and ib < nb:
                if cols[j][ia] < cols[k][ib]:
                    merged.push_back(cols[j][ia])
                    ia += 1
                elif cols[j][ia] > cols[k][ib]:
                    merged.push_back(cols[k][ib])
                    ib += 1
                else:
                    ia += 1
                    ib += 1
            while ia < na:
                merged.push_back(cols[j][ia])
                ia += 1
            while ib < nb:
                merged.push_back(cols[k][ib])
                ib += 1
            cols[j].swap(merged)
    return kills_arr
