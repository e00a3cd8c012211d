"""Pure-Python boundary-matrix reduction kernel.

Mirrors the compiled kernel in ``_reduction.pyx`` exactly (same algorithm,
same input/output contract) so the two backends are interchangeable.
"""

from __future__ import annotations

import numpy as np


def _xor_sorted(a: list[int], b: list[int]) -> list[int]:
    """Symmetric difference of two ascending index lists, kept ascending."""
    out = []
    ia, ib = 0, 0
    na, nb = len(a), len(b)
    while ia < na and ib < nb:
        x, y = a[ia], b[ib]
        if x < y:
            out.append(x)
            ia += 1
        elif x > y:
            out.append(y)
            ib += 1
        else:
            ia += 1
            ib += 1
    if ia < na:
        out.extend(a[ia:])
    if ib < nb:
        out.extend(b[ib:])
    return out


def reduce_boundary(col_ptr, rows) -> np.ndarray:
    """Standard left-to-right column reduction over GF(2).

    Args:
        col_ptr: int64 array of length n_cols + 1; column j owns
            rows[col_ptr[j]:col_ptr[j+1]], ascending.
        rows: int32 array of row indices.

    Returns:
        int64 array ``kills`` of length n_cols: kills[j] is the lowest row
        index of the reduced column j (the simplex whose class column j
        destroys), or -1 if the column reduces to zero (a creator).
    """
    cp = np.asarray(col_ptr, dtype=np.int64)
    rw = np.asarray(rows, dtype=np.int32)
    n = cp.shape[0] - 1
    cols: list[list[int]] = [
        [int(r) for r in rw[cp[j]:cp[j + 1]]] for j in range(n)
    ]
    low_to_col = [-1] * n
    kills = np.full(n, -1, dtype=np.int64)
    for j in range(n):
        col = cols[j]
        while col:
            low = col[-1]
            k = low_to_col[low]
            if k < 0:
                low_to_col[low] = j
                kills[j] = low
                break
            col = _xor_sorted(col, cols[k])
        cols[j] = col
    return kills
