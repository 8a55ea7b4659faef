"""Grouping kernel agreement: compiled extension vs numpy fallback."""

import os
import subprocess
import sys
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minkey import grouping
from minkey._grouppy import group_ids as numpy_group_ids

try:
    from minkey._groupfast import group_ids as compiled_group_ids
    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED, reason="extension not built")


def oracle_labels(cells, cols):
    """First-appearance dense labels via plain dict grouping."""
    seen: dict[tuple, int] = {}
    out = []
    for row in cells[:, cols].tolist() if len(cols) else [[]] * len(cells):
        key = tuple(row)
        if key not in seen:
            seen[key] = len(seen)
        out.append(seen[key])
    return np.array(out, dtype=np.int32), len(seen) if len(cells) else 0


def random_cells(rng, rows, cols, cardinality):
    return rng.integers(0, cardinality, size=(rows, cols), dtype=np.int32)


@pytest.mark.parametrize("rows,ncols,card", [
    (1, 1, 1), (7, 3, 2), (50, 4, 3), (200, 6, 5), (500, 2, 100),
])
def test_numpy_matches_oracle(rows, ncols, card):
    rng = np.random.default_rng(rows * 31 + ncols)
    cells = random_cells(rng, rows, ncols, card)
    cols = np.arange(ncols, dtype=np.int64)
    ids, n = numpy_group_ids(cells, cols)
    exp_ids, exp_n = oracle_labels(cells, cols)
    assert n == exp_n
    assert np.array_equal(ids, exp_ids)


@needs_compiled
@pytest.mark.parametrize("rows,ncols,card", [
    (1, 1, 1), (7, 3, 2), (50, 4, 3), (200, 6, 5), (500, 2, 100), (3000, 5, 4),
])
def test_compiled_matches_numpy(rows, ncols, card):
    rng = np.random.default_rng(rows * 17 + ncols)
    cells = random_cells(rng, rows, ncols, card)
    for k in range(1, ncols + 1):
        cols = np.asarray(rng.choice(ncols, size=k, replace=False), dtype=np.int64)
        got = compiled_group_ids(cells, cols)
        want = numpy_group_ids(cells, cols)
        assert got[1] == want[1]
        assert np.array_equal(got[0], want[0])


def test_column_subset_only_those_columns_matter():
    cells = np.array([[0, 9], [0, 8], [1, 9]], dtype=np.int32)
    ids, n = grouping.group_ids(cells, [0])
    assert n == 2
    assert ids.tolist() == [0, 0, 1]


def test_empty_column_set_single_group():
    cells = np.array([[1], [2], [3]], dtype=np.int32)
    ids, n = grouping.group_ids(cells, [])
    assert n == 1
    assert ids.tolist() == [0, 0, 0]


def test_zero_rows():
    cells = np.zeros((0, 3), dtype=np.int32)
    ids, n = grouping.group_ids(cells, [0, 2])
    assert n == 0
    assert len(ids) == 0


def test_first_appearance_label_order():
    cells = np.array([[5], [3], [5], [7], [3]], dtype=np.int32)
    ids, n = grouping.group_ids(cells, [0])
    assert n == 3
    assert ids.tolist() == [0, 1, 0, 2, 1]


def test_group_stats_freq1_counting():
    # tuples: (0,0) x2, (0,1) x1, (1,0) x1 -> two singletons, three groups
    cells = np.array([[0, 0], [0, 1], [0, 0], [1, 0]], dtype=np.int32)
    freq1, n_groups = grouping.group_stats(cells, [0, 1])
    assert (freq1, n_groups) == (2, 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 3), min_size=2, max_size=2),
                min_size=1, max_size=40))
def test_group_stats_matches_counter(rows):
    cells = np.array(rows, dtype=np.int32)
    freq1, n_groups = grouping.group_stats(cells, [0, 1])
    counts = Counter(map(tuple, rows))
    assert n_groups == len(counts)
    assert freq1 == sum(1 for c in counts.values() if c == 1)


def _kernel_under_env(value):
    env = dict(os.environ, MINKEY_KERNEL=value)
    proc = subprocess.run(
        [sys.executable, "-c", "from minkey.grouping import KERNEL; print(KERNEL)"],
        capture_output=True, text=True, env=env,
    )
    return proc


def test_env_forces_numpy_kernel():
    proc = _kernel_under_env("numpy")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "numpy"


@needs_compiled
def test_env_forces_compiled_kernel():
    proc = _kernel_under_env("compiled")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "compiled"


def test_env_rejects_unknown_kernel():
    proc = _kernel_under_env("gpu")
    assert proc.returncode != 0
    assert "MINKEY_KERNEL" in proc.stderr
