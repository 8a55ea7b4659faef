"""Per-class instance table: the signature index behind score evaluation.

One row per subject of the class, one column per property seen on at least
one of those subjects. Each cell holds the signature of the subject's
object set for that property (empty set included). Cells are additionally
interned per column into dense int ids (0 = empty set) and kept as one
int32 matrix, which is what the grouping kernels consume; the id
assignment is first-appearance in row order per column, so a table
reloaded from disk reproduces the exact same matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import grouping
from .ntriples import Triple
from .signatures import SEP, ObjectSignature, escape_component, signature, term_key

EMPTY_ID = 0  # reserved per-column cell id for the empty object set


@dataclass(frozen=True, slots=True)
class StorageBackend:
    """Where the built table lives: transient memory or a persisted index file."""

    kind: str = "memory"
    path: str | Path | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("memory", "disk"):
            raise ValueError(f"backend kind must be memory or disk, got {self.kind!r}")
        if self.kind == "disk" and self.path is None:
            raise ValueError("disk backend requires an index file path")


MEMORY = StorageBackend("memory")


class ClassTable:
    """Immutable (subject x property) table of object-set signatures.

    `subjects` fixes the row order (sorted), `properties` keeps first-seen
    order from the input stream. After construction the table is read-only
    and safe for concurrent readers.
    """

    __slots__ = (
        "class_iri",
        "subjects",
        "properties",
        "cells",
        "score_mode",
        "backend_kind",
        "_sigs",
        "_prop_index",
        "_raw",
    )

    def __init__(
        self,
        *,
        subjects: tuple[str, ...],
        properties: tuple[str, ...],
        cells: np.ndarray,
        sigs: list[list[ObjectSignature]],
        score_mode: str,
        backend_kind: str = "memory",
        class_iri: str | None = None,
        raw: dict[tuple[int, int], tuple[str, ...]] | None = None,
    ) -> None:
        if cells.shape != (len(subjects), len(properties)):
            raise ValueError("cell matrix shape does not match subjects x properties")
        self.subjects = subjects
        self.properties = properties
        self.cells = cells
        self._sigs = sigs
        self.score_mode = score_mode
        self.backend_kind = backend_kind
        self.class_iri = class_iri
        self._raw = raw
        self._prop_index = {p: j for j, p in enumerate(properties)}

    @property
    def n_subjects(self) -> int:
        return len(self.subjects)

    @property
    def n_properties(self) -> int:
        return len(self.properties)

    def property_index(self, prop: str) -> int:
        try:
            return self._prop_index[prop]
        except KeyError:
            raise ValueError(f"property not in table: {prop}") from None

    def resolve_columns(self, props: Iterable[str | int]) -> list[int]:
        """Map property IRIs (or raw column indices) to column indices."""
        cols = []
        for p in props:
            if isinstance(p, str):
                cols.append(self.property_index(p))
            else:
                if not 0 <= p < self.n_properties:
                    raise ValueError(f"property column out of range: {p}")
                cols.append(int(p))
        return cols

    def cell(self, row: int, col: int) -> ObjectSignature:
        return self._sigs[col][self.cells[row, col]]

    def cell_objects(self, row: int, col: int) -> tuple[str, ...]:
        """Raw sorted object terms of a cell (kept only when requested at build)."""
        if self._raw is None:
            raise ValueError("table was built without keep_raw=True")
        return self._raw.get((row, col), ())

    def has_raw(self) -> bool:
        return self._raw is not None

    def coverage(self, col: int) -> Fraction:
        """Fraction of subjects with a non-empty object set for this column."""
        if self.n_subjects == 0:
            return Fraction(0)
        nonempty = int((self.cells[:, col] != EMPTY_ID).sum())
        return Fraction(nonempty, self.n_subjects)

    def group_stats(self, cols: Sequence[int]) -> tuple[int, int]:
        """(frequency-1 row count, group count) over the given columns."""
        return grouping.group_stats(self.cells, cols)

    def column_sigs(self, col: int) -> list[ObjectSignature]:
        """Signature for each interned id of one column (index 0 = empty set)."""
        return self._sigs[col]


def term_object_key(obj) -> str:
    """The string a triple object contributes to its cell's object set."""
    return term_key(obj)


def build_table(
    triples: Iterable[Triple],
    subjects: set[str] | Iterable[str],
    backend: StorageBackend = MEMORY,
    *,
    score_mode: str = "exact",
    keep_raw: bool = False,
    class_iri: str | None = None,
) -> ClassTable:
    """Build the per-class table from the class's triples.

    Duplicate triples collapse silently (object sets). Triples whose subject
    is not in `subjects` are ignored; subjects without triples still get a
    row of empty cells. With a disk backend the table is persisted to the
    index file and read back from it, so the caller gets the same view a
    later open_index() would.
    """
    if score_mode not in ("exact", "hashed"):
        raise ValueError(f"score_mode must be exact or hashed, got {score_mode!r}")
    subject_list = tuple(sorted(subjects))
    subj_index = {s: i for i, s in enumerate(subject_list)}

    properties: list[str] = []
    prop_index: dict[str, int] = {}
    cell_objs: dict[tuple[int, int], str | set[str]] = {}
    raw: dict[tuple[int, int], set[str]] | None = {} if keep_raw else None

    for t in triples:
        row = subj_index.get(t.subject)
        if row is None:
            continue
        col = prop_index.get(t.predicate)
        if col is None:
            col = len(properties)
            prop_index[t.predicate] = col
            properties.append(t.predicate)
        key = (row, col)
        obj_key = term_key(t.obj)
        cur = cell_objs.get(key)
        if cur is None:
            cell_objs[key] = obj_key
        elif isinstance(cur, str):
            if cur != obj_key:
                cell_objs[key] = {cur, obj_key}
        else:
            cur.add(obj_key)
        if raw is not None:
            raw.setdefault(key, set()).add(t.obj.nt())

    s_count, p_count = len(subject_list), len(properties)
    cells = np.zeros((s_count, p_count), dtype=np.int32)
    keep_canonical = score_mode == "exact"
    empty_sig = signature(set(), keep_canonical=keep_canonical)
    # single-valued cells dominate; equal values anywhere in the table are
    # escaped and hashed once and share one signature instance
    single_cache: dict[str, ObjectSignature] = {}
    sigs: list[list[ObjectSignature]] = []
    for col in range(p_count):
        col_sigs = [empty_sig]
        interned: dict[object, int] = {}
        for row in range(s_count):
            objs = cell_objs.get((row, col))
            if objs is None:
                continue
            if isinstance(objs, str):
                sig = single_cache.get(objs)
                if sig is None:
                    sig = signature({objs}, keep_canonical=keep_canonical)
                    single_cache[objs] = sig
            else:
                sig = signature(objs, keep_canonical=keep_canonical)
            intern_key = sig.canonical if keep_canonical else sig.digest
            cid = interned.get(intern_key)
            if cid is None:
                cid = len(col_sigs)
                interned[intern_key] = cid
                col_sigs.append(sig)
            cells[row, col] = cid
        sigs.append(col_sigs)

    frozen_raw = None
    if raw is not None:
        frozen_raw = {k: tuple(sorted(v)) for k, v in raw.items()}
    table = ClassTable(
        subjects=subject_list,
        properties=tuple(properties),
        cells=cells,
        sigs=sigs,
        score_mode=score_mode,
        backend_kind="memory",
        class_iri=class_iri,
        raw=frozen_raw,
    )
    if backend.kind == "disk":
        from . import index_io

        index_io.write_index(table, backend.path)
        disk_table = index_io.load_table(backend.path)
        if frozen_raw is not None:
            disk_table._raw = frozen_raw
        if class_iri is not None:
            disk_table.class_iri = class_iri
        return disk_table
    return table


def column_signatures(table: ClassTable, props: Iterable[str | int]) -> list[bytes]:
    """One combined per-row value over the selected properties, in row order.

    Equal return values mean equal tuples of cell signatures across the
    properties (taken in ascending column order). Exact mode combines the
    canonical forms with the escaped-join scheme and is collision-free;
    hashed mode concatenates the 16-byte cell digests.
    """
    cols = sorted(table.resolve_columns(props))
    out: list[bytes] = []
    if table.score_mode == "hashed":
        for row in range(table.n_subjects):
            out.append(b"".join(table.cell(row, c).digest for c in cols))
        return out
    sep = SEP.encode()
    for row in range(table.n_subjects):
        parts = []
        for c in cols:
            can = table.cell(row, c).canonical
            parts.append(b"0" if can is None else b"1" + escape_component(can).encode())
        out.append(sep.join(parts))
    return out
