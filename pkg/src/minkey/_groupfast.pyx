# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row-grouping kernel.

Same contract as the numpy fallback: label rows by their tuple of cell ids
over the requested columns, dense labels in first-appearance order. One
open-addressing hash table per column pass, keyed on the exact packed value
label * width + cell (int64, no collisions possible for int32 inputs), so
equal labels always mean equal row tuples.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

import numpy as np

cdef extern from *:
    """
    static inline long long mk_mix(long long x) {
        unsigned long long z = (unsigned long long)x;
        z ^= z >> 33;
        z *= 0xff51afd7ed558ccdULL;
        z ^= z >> 33;
        return (long long)z;
    }
    """
    long long mk_mix(long long x) nogil


cdef int _pass(const int[:, ::1] cells, Py_ssize_t col, long long* key,
               long long* slot_key, int* slot_val, Py_ssize_t cap) nogil:
    # one grouping pass: key[i] <- dense label of (key[i], cells[i, col])
    cdef Py_ssize_t s = cells.shape[0]
    cdef Py_ssize_t i, j
    cdef long long width = 0, packed, mask = cap - 1
    cdef int n = 0
    for i in range(s):
        if cells[i, col] >= width:
            width = cells[i, col] + 1
    memset(slot_key, 0xFF, cap * sizeof(long long))  # empty slots hold -1
    for i in range(s):
        packed = key[i] * width + cells[i, col]
        j = mk_mix(packed) & mask
        while slot_key[j] != packed:
            if slot_key[j] == -1:
                slot_key[j] = packed
                slot_val[j] = n
                n += 1
                break
            j = (j + 1) & mask
        key[i] = slot_val[j]
    return n


def group_ids(const int[:, ::1] cells, const long[::1] cols):
    """Label rows by their tuple of cell ids over `cols`.

    Returns (ids, n_groups) with dense int32 labels in first-appearance
    order. Cell ids must be non-negative (they are dense per-column ids).
    """
    cdef Py_ssize_t s = cells.shape[0]
    cdef Py_ssize_t ncols = cols.shape[0]
    ids = np.zeros(s, dtype=np.int32)
    if s == 0:
        return ids, 0
    cdef int[::1] out = ids
    cdef Py_ssize_t i, k
    cdef int n = 1
    if ncols == 0:
        return ids, 1

    cdef Py_ssize_t cap = 4
    while cap < 2 * s:
        cap <<= 1
    cdef long long* key = <long long*> malloc(s * sizeof(long long))
    cdef long long* slot_key = <long long*> malloc(cap * sizeof(long long))
    cdef int* slot_val = <int*> malloc(cap * sizeof(int))
    if key == NULL or slot_key == NULL or slot_val == NULL:
        free(key); free(slot_key); free(slot_val)
        raise MemoryError
    try:
        with nogil:
            memset(key, 0, s * sizeof(long long))
            for k in range(ncols):
                n = _pass(cells, cols[k], key, slot_key, slot_val, cap)
            for i in range(s):
                out[i] = <int> key[i]
    finally:
        free(key); free(slot_key); free(slot_val)
    return ids, n
