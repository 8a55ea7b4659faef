"""Single-file persisted index: a sorted key-value store for table cells.

Byte layout (all integers little-endian, strings UTF-8 with u32 length
prefixes):

    magic       8 bytes   "MKIX0001"
    flags       u8        bit 0: canonical sidecar present (exact mode)
    class IRI   u32 + bytes (length 0 when unknown)
    subjects    u32 count, then one string per row, in row order
    properties  u32 count, then one string per column, in column order
    records     u64 count, then per non-empty cell:
                  u32 subject row, u32 property column, 16-byte digest
                sorted by (subject row, property column)
    sidecar     u64 count, then per distinct digest:
                  16-byte digest, u32 + canonical-form bytes
                (present only when flag bit 0 is set)

Empty cells are implicit: a (row, column) pair without a record resolves
to the empty-set signature. The sorted composite key makes point lookups a
binary search, and reading records in file order reproduces the exact
per-column interning order of an in-memory build.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .signatures import EMPTY_SIGNATURE, ObjectSignature, signature
from .table import ClassTable

MAGIC = b"MKIX0001"
_FLAG_EXACT = 0x01
_REC_DTYPE = np.dtype([("s", "<u4"), ("p", "<u4"), ("d", "V16")])


class IndexFileError(Exception):
    """Raised with the failing path and operation for any index-file problem."""


def write_index(table: ClassTable, path: str | Path) -> None:
    """Persist a built table. Exact-mode tables keep their canonical forms."""
    exact = table.score_mode == "exact"
    try:
        with open(path, "wb") as fh:
            _write(fh, table, exact)
    except OSError as exc:
        raise IndexFileError(f"failed to write index file {path}: {exc}") from exc


def _write(fh, table: ClassTable, exact: bool) -> None:
    fh.write(MAGIC)
    fh.write(struct.pack("<B", _FLAG_EXACT if exact else 0))
    _write_str(fh, table.class_iri or "")
    fh.write(struct.pack("<I", table.n_subjects))
    for s in table.subjects:
        _write_str(fh, s)
    fh.write(struct.pack("<I", table.n_properties))
    for p in table.properties:
        _write_str(fh, p)

    records = _collect_records(table)
    fh.write(struct.pack("<Q", len(records)))
    fh.write(records.tobytes())

    if exact:
        sidecar: dict[bytes, str] = {}
        for col in range(table.n_properties):
            for sig in table.column_sigs(col):
                if sig.canonical is None:
                    continue
                known = sidecar.get(sig.digest)
                if known is None:
                    sidecar[sig.digest] = sig.canonical
                elif known != sig.canonical:
                    # would silently merge distinct values on reload
                    raise IndexFileError(
                        f"digest collision between object sets {known!r} and "
                        f"{sig.canonical!r}; refusing to persist an inexact index")
        fh.write(struct.pack("<Q", len(sidecar)))
        for digest in sorted(sidecar):
            fh.write(digest)
            _write_str(fh, sidecar[digest])


def _collect_records(table: ClassTable) -> np.ndarray:
    rows, cols = np.nonzero(table.cells)
    records = np.empty(len(rows), dtype=_REC_DTYPE)
    records["s"] = rows
    records["p"] = cols
    for col in range(table.n_properties):
        col_sigs = table.column_sigs(col)
        lut = np.frombuffer(b"".join(sig.digest for sig in col_sigs), dtype="V16")
        mask = cols == col
        records["d"][mask] = lut[table.cells[rows[mask], col]]
    # np.nonzero already yields row-major (subject, property) order
    return records


def load_table(path: str | Path) -> ClassTable:
    """Rebuild a ClassTable from an index file (backend tag "disk")."""
    reader = open_index(path)
    subjects, properties = reader.subjects, reader.properties
    s_count, p_count = len(subjects), len(properties)
    score_mode = "exact" if reader.exact else "hashed"
    empty_sig = signature(set(), keep_canonical=reader.exact)

    cells = np.zeros((s_count, p_count), dtype=np.int32)
    sigs: list[list[ObjectSignature]] = []
    for col in range(p_count):
        mask = reader.prop_ids == col
        rows = reader.subj_ids[mask]
        col_sigs = [empty_sig]
        if rows.size:
            dcol = reader.digests[mask]
            as_pairs = np.frombuffer(dcol.tobytes(), dtype="<u8").reshape(-1, 2)
            _, first_idx, inverse = np.unique(
                as_pairs, axis=0, return_index=True, return_inverse=True)
            inverse = inverse.ravel()
            # relabel unique groups into first-appearance (= row) order
            order = np.argsort(first_idx, kind="stable")
            rank = np.empty(len(first_idx), dtype=np.int64)
            rank[order] = np.arange(len(first_idx))
            cells[rows, col] = rank[inverse] + 1
            for rec_at in first_idx[order]:
                digest = bytes(dcol[rec_at])
                canonical = reader.canonical_of(digest)
                col_sigs.append(ObjectSignature(digest=digest, canonical=canonical))
        sigs.append(col_sigs)

    return ClassTable(
        subjects=subjects,
        properties=properties,
        cells=cells,
        sigs=sigs,
        score_mode=score_mode,
        backend_kind="disk",
        class_iri=reader.class_iri or None,
    )


class IndexReader:
    """Read-only view of an index file with binary-search cell lookup."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        try:
            with open(path, "rb") as fh:
                self._parse(fh)
        except OSError as exc:
            raise IndexFileError(f"failed to read index file {path}: {exc}") from exc

    def _parse(self, fh) -> None:
        if _read_exact(fh, len(MAGIC), self.path) != MAGIC:
            raise IndexFileError(f"{self.path} is not an index file (bad magic)")
        flags = struct.unpack("<B", _read_exact(fh, 1, self.path))[0]
        self.exact = bool(flags & _FLAG_EXACT)
        self.class_iri = _read_str(fh, self.path)
        n_subjects = struct.unpack("<I", _read_exact(fh, 4, self.path))[0]
        self.subjects = tuple(_read_str(fh, self.path) for _ in range(n_subjects))
        n_properties = struct.unpack("<I", _read_exact(fh, 4, self.path))[0]
        self.properties = tuple(_read_str(fh, self.path) for _ in range(n_properties))

        n_records = struct.unpack("<Q", _read_exact(fh, 8, self.path))[0]
        raw = _read_exact(fh, n_records * _REC_DTYPE.itemsize, self.path)
        records = np.frombuffer(raw, dtype=_REC_DTYPE)
        self.subj_ids = records["s"].astype(np.int64)
        self.prop_ids = records["p"].astype(np.int64)
        self.digests = records["d"]
        if n_records:
            if int(self.subj_ids.max()) >= n_subjects:
                raise IndexFileError(f"{self.path}: record subject out of range")
            if int(self.prop_ids.max()) >= n_properties:
                raise IndexFileError(f"{self.path}: record property out of range")
        # composite keys are pre-sorted by construction; lookups bisect them
        self._composite = (self.subj_ids << 32) | self.prop_ids
        if n_records and np.any(np.diff(self._composite) <= 0):
            raise IndexFileError(f"{self.path}: records are not strictly sorted")

        self._sidecar: dict[bytes, str] = {}
        if self.exact:
            n_entries = struct.unpack("<Q", _read_exact(fh, 8, self.path))[0]
            for _ in range(n_entries):
                digest = _read_exact(fh, 16, self.path)
                self._sidecar[digest] = _read_str(fh, self.path)

        self._subj_index = {s: i for i, s in enumerate(self.subjects)}
        self._prop_index = {p: i for i, p in enumerate(self.properties)}

    def canonical_of(self, digest: bytes) -> str | None:
        return self._sidecar.get(digest)

    def lookup(self, subject: str, prop: str) -> ObjectSignature:
        """Cell signature for a (subject, property) pair; empty-set when absent."""
        try:
            srow = self._subj_index[subject]
        except KeyError:
            raise ValueError(f"subject not in index: {subject}") from None
        try:
            pcol = self._prop_index[prop]
        except KeyError:
            raise ValueError(f"property not in index: {prop}") from None
        key = (srow << 32) | pcol
        at = int(np.searchsorted(self._composite, key))
        if at >= len(self._composite) or self._composite[at] != key:
            return EMPTY_SIGNATURE
        digest = bytes(self.digests[at])
        return ObjectSignature(digest=digest, canonical=self.canonical_of(digest))


def open_index(path: str | Path) -> IndexReader:
    return IndexReader(path)


def _write_str(fh, text: str) -> None:
    data = text.encode("utf-8")
    fh.write(struct.pack("<I", len(data)))
    fh.write(data)


def _read_str(fh, path) -> str:
    length = struct.unpack("<I", _read_exact(fh, 4, path))[0]
    return _read_exact(fh, length, path).decode("utf-8")


def _read_exact(fh, n: int, path) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise IndexFileError(f"truncated index file {path}")
    return data
