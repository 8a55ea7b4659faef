"""Deterministic synthetic dataset generator for benchmarks and fixtures.

Emits N-Triples for one class: a type triple per subject plus literal
values under generated properties. Randomness comes from a seeded Mersenne
Twister drawn exclusively through getrandbits (rejection sampling for
bounded ints, 53-bit draws for probabilities), so identical specs produce
byte-identical output on any platform.

A planted key assigns each subject its mixed-radix digits over the chosen
columns: digit j of the row number in the smallest base whose len(planted)
digits cover all subjects. The digit columns are then jointly unique by
construction (and individually far from unique), which is verified before
anything is emitted.
"""

from __future__ import annotations

import io
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .ntriples import Term, Triple

_PROB_BITS = 53


@dataclass(frozen=True, slots=True)
class GenSpec:
    seed: int
    subjects: int
    properties: int
    null_rate: float = 0.0
    duplicate_rate: float = 0.0
    multi_rate: float = 0.0
    planted_key: tuple[int, ...] | None = None
    class_iri: str = "http://example.org/Thing"
    base_iri: str = "http://example.org/"

    def __post_init__(self) -> None:
        if self.subjects < 1 or self.properties < 1:
            raise ValueError("subjects and properties must be at least 1")
        for name in ("null_rate", "duplicate_rate", "multi_rate"):
            rate = getattr(self, name)
            if not 0 <= rate <= 1:
                raise ValueError(f"{name} must be within [0, 1], got {rate}")
        if self.planted_key is not None:
            planted = tuple(sorted(set(self.planted_key)))
            if not planted:
                raise ValueError("planted key must name at least one property")
            if planted[0] < 0 or planted[-1] >= self.properties:
                raise ValueError(f"planted key {planted} outside property range")
            object.__setattr__(self, "planted_key", planted)
            # rates apply to every non-planted cell; total duplication or
            # total nullity leaves nothing for a key to identify
            if self.duplicate_rate == 1:
                raise ValueError("planted key contradicts duplicate_rate=1")
            if self.null_rate == 1:
                raise ValueError("planted key contradicts null_rate=1")

    def subject_iri(self, row: int) -> str:
        width = len(str(self.subjects - 1))
        return f"{self.base_iri}s{row:0{width}d}"

    def property_iri(self, col: int) -> str:
        width = len(str(self.properties - 1))
        return f"{self.base_iri}p{col:0{width}d}"


def _below(rng: random.Random, n: int) -> int:
    """Uniform int in [0, n) via rejection on getrandbits."""
    if n <= 1:
        return 0
    bits = (n - 1).bit_length()
    while True:
        value = rng.getrandbits(bits)
        if value < n:
            return value


def _chance(rng: random.Random, threshold: int) -> bool:
    return rng.getrandbits(_PROB_BITS) < threshold


def _digit_base(subjects: int, width: int) -> int:
    base = max(2, math.ceil(subjects ** (1 / width)))
    while base**width < subjects:
        base += 1
    return base


def iter_triples(spec: GenSpec) -> Iterator[Triple]:
    """Generate the dataset; raises before any output on a bad planted key."""
    rng = random.Random(spec.seed)
    planted = spec.planted_key or ()
    digit_pos = {col: j for j, col in enumerate(planted)}
    base = _digit_base(spec.subjects, len(planted)) if planted else 0
    if planted:
        seen = {tuple((row // base**j) % base for j in range(len(planted)))
                for row in range(spec.subjects)}
        if len(seen) != spec.subjects:
            raise ValueError("planted key does not identify every subject")

    null_t = int(spec.null_rate * 2**_PROB_BITS)
    dup_t = int(spec.duplicate_rate * 2**_PROB_BITS)
    multi_t = int(spec.multi_rate * 2**_PROB_BITS)
    pool = max(2, math.isqrt(spec.subjects))

    for row in range(spec.subjects):
        subject = spec.subject_iri(row)
        yield Triple(subject, "http://www.w3.org/1999/02/22-rdf-syntax-ns#type",
                     Term("iri", spec.class_iri))
        for col in range(spec.properties):
            prop = spec.property_iri(col)
            if col in digit_pos:
                digit = (row // base ** digit_pos[col]) % base
                yield Triple(subject, prop, Term("literal", f"k{digit}"))
                continue
            if _chance(rng, null_t):
                continue
            if _chance(rng, dup_t):
                value = f"d{_below(rng, pool)}"
            else:
                value = f"u{row}"
            yield Triple(subject, prop, Term("literal", value))
            if _chance(rng, multi_t):
                yield Triple(subject, prop, Term("literal", f"d{_below(rng, pool)}"))


def generate(spec: GenSpec) -> bytes:
    """The whole dataset as one N-Triples byte string."""
    buf = io.BytesIO()
    generate_to(spec, buf)
    return buf.getvalue()


def generate_to(spec: GenSpec, out) -> int:
    """Stream the dataset to a path or binary file object; returns triple count."""
    if isinstance(out, (str, Path)):
        with open(out, "wb") as fh:
            return generate_to(spec, fh)
    count = 0
    for triple in iter_triples(spec):
        out.write(triple.nt().encode("utf-8"))
        out.write(b"\n")
        count += 1
    return count
