"""numpy implementation of the row-grouping kernel.

Used when the compiled extension is unavailable (or forced off). Groups are
built column by column: the running group label and the next column's cell
id are packed into one int64 (exact packing, not hashing) and re-densified
with np.unique, so equal labels always mean equal row tuples.
"""

from __future__ import annotations

import numpy as np


def group_ids(cells: np.ndarray, cols: np.ndarray) -> tuple[np.ndarray, int]:
    """Label rows by their tuple of cell ids over `cols`.

    Returns (ids, n_groups) with dense labels in first-appearance order,
    matching the compiled kernel exactly.
    """
    s = cells.shape[0]
    if s == 0:
        return np.zeros(0, dtype=np.int32), 0
    if len(cols) == 0:
        return np.zeros(s, dtype=np.int32), 1

    key = np.zeros(s, dtype=np.int64)
    first_idx = np.zeros(1, dtype=np.int64)
    for c in cols:
        col = cells[:, c].astype(np.int64, copy=False)
        width = int(col.max()) + 1
        packed = key * width + col
        _, first_idx, key = np.unique(packed, return_index=True, return_inverse=True)
    n = len(first_idx)
    # np.unique sorts by packed value; relabel to first-appearance order
    order = np.argsort(first_idx, kind="stable")
    remap = np.empty(n, dtype=np.int64)
    remap[order] = np.arange(n)
    return remap[key].astype(np.int32), n
