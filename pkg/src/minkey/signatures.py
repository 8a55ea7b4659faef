"""Canonical digests for object sets.

An instance's value for a property is a *set* of terms. Two cells compare
equal iff their sets are equal, so each set is reduced to one canonical
string and one 128-bit digest:

  term key       "<"+iri | "_"+label | '"'+lexical [ SEP+"D"+datatype
                 | SEP+"G"+language ], with SEP/ESC occurrences inside each
                 component escaped (ESC doubles itself, ESC+SEP encodes SEP)
  canonical form term keys sorted ascending by code point, each escaped
                 again, joined with SEP
  digest         xxh3-128 of the canonical form's UTF-8 bytes

SEP is 0x1F, ESC is 0x1B. Escaping at both levels keeps the mapping from
object sets to canonical forms injective; naive joining would let
{"a", "b<SEP>c"} collide with {"a<SEP>b", "c"}.

The empty set gets the reserved all-zero digest and no canonical form, so
an instance that lacks a property is comparable to (and distinct from) any
instance that has one, including a lone empty-string value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import xxhash

from .ntriples import Term

SEP = "\x1f"
ESC = "\x1b"

EMPTY_DIGEST = b"\x00" * 16


def escape_component(s: str) -> str:
    if ESC in s:
        s = s.replace(ESC, ESC + ESC)
    if SEP in s:
        s = s.replace(SEP, ESC + SEP)
    return s


def term_key(term: Term) -> str:
    """Injective string form of an object term, used inside signatures."""
    if term.kind == "iri":
        return "<" + escape_component(term.value)
    if term.kind == "blank":
        return "_" + escape_component(term.value)
    key = '"' + escape_component(term.value)
    if term.datatype is not None:
        key += SEP + "D" + escape_component(term.datatype)
    elif term.lang is not None:
        key += SEP + "G" + escape_component(term.lang)
    return key


def canonical_form(objects: Iterable[str]) -> str | None:
    """Sorted, escaped, SEP-joined object strings; None for the empty set."""
    items = sorted(set(objects))
    if not items:
        return None
    return SEP.join(escape_component(item) for item in items)


def digest_of(canonical: str | None) -> bytes:
    if canonical is None:
        return EMPTY_DIGEST
    return xxhash.xxh3_128_digest(canonical.encode("utf-8"))


@dataclass(frozen=True, slots=True)
class ObjectSignature:
    """Digest of one object set; canonical form retained in exact mode."""

    digest: bytes
    canonical: str | None = None

    @property
    def is_empty(self) -> bool:
        return self.digest == EMPTY_DIGEST


EMPTY_SIGNATURE = ObjectSignature(EMPTY_DIGEST, None)


def signature(objects: Iterable[str], keep_canonical: bool = True) -> ObjectSignature:
    """Order-insensitive signature of a set of object lexical strings."""
    canonical = canonical_form(objects)
    if canonical is None:
        return EMPTY_SIGNATURE
    return ObjectSignature(digest_of(canonical), canonical if keep_canonical else None)
