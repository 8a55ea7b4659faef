"""Row-grouping kernel selection.

The hot loop of scoring is grouping the instance table's rows by their cell
ids over a property subset. A compiled kernel is preferred; a numpy fallback
is selected automatically when the extension is missing. Both produce
identical labels (dense, first-appearance order), so everything above this
module is kernel-agnostic.

Set MINKEY_KERNEL=numpy or MINKEY_KERNEL=compiled to force one side
(compiled raises at import if the extension is absent).
"""

from __future__ import annotations

import os

import numpy as np

_requested = os.environ.get("MINKEY_KERNEL", "auto")
if _requested not in ("auto", "compiled", "numpy"):
    raise RuntimeError(f"MINKEY_KERNEL must be auto, compiled or numpy, got {_requested!r}")

_impl = None
if _requested in ("auto", "compiled"):
    try:
        from . import _groupfast as _impl
        KERNEL: str = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = None
if _impl is None:
    from . import _grouppy as _impl
    KERNEL = "numpy"


def group_ids(cells: np.ndarray, cols) -> tuple[np.ndarray, int]:
    """Dense row labels (first-appearance order) over the given columns."""
    return _impl.group_ids(cells, np.asarray(cols, dtype=np.int64))


def group_stats(cells: np.ndarray, cols) -> tuple[int, int]:
    """(rows whose tuple over `cols` occurs exactly once, number of groups)."""
    ids, n_groups = _impl.group_ids(cells, np.asarray(cols, dtype=np.int64))
    if n_groups == 0:
        return 0, 0
    counts = np.bincount(ids, minlength=n_groups)
    return int((counts == 1).sum()), n_groups
