"""Shared fixtures: the two worked examples, degenerate tables, random data."""

from __future__ import annotations

import random

import pytest

from minkey.ntriples import Term, Triple
from minkey.table import ClassTable, build_table

EX = "http://example.org/"
TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"

NERVE_CLASS = EX + "Nerve"
FILM_CLASS = EX + "Film"

# 4 anatomy instances: one lacks grayPage, two lack meshNumber, two share
# the same graySubject value
NERVE_ROWS = {
    "Trigeminal_nerve": {
        "grayPage": ["886"],
        "graySubject": ["200"],
        "meshNumber": ["A08.800.800.120.760"],
    },
    "Median_nerve": {"grayPage": ["938"], "graySubject": ["210"]},
    "Lacrimal_nerve": {"grayPage": ["887"], "graySubject": ["200"]},
    "Olfactory_nerve": {"graySubject": ["196"], "meshNumber": ["A08.800.800.120.640"]},
}

# 6 films by their actor sets; f6 has no actors at all but is still
# distinguishable because nobody else has zero actors
FILM_ROWS = {
    "f1": {"hasActor": ["B.Pitt", "J.Roberts"]},
    "f2": {"hasActor": ["G.Clooney", "B.Pitt", "J.Roberts"]},
    "f3": {"hasActor": ["B.Pitt", "G.Clooney"]},
    "f4": {"hasActor": ["G.Clooney", "N.Krause"]},
    "f5": {"hasActor": ["F.Potente"]},
    "f6": {},
}


def triples_from_rows(rows: dict, class_iri: str) -> tuple[set[str], list[Triple]]:
    """Rows as {subject: {property: [literal, ...]}} plus a type edge each."""
    subjects = set()
    triples = []
    for name, props in rows.items():
        subject = EX + name
        subjects.add(subject)
        triples.append(Triple(subject, TYPE, Term("iri", class_iri)))
        for prop, values in props.items():
            for value in values:
                triples.append(Triple(subject, EX + prop, Term("literal", value)))
    return subjects, triples


def build_from_rows(rows: dict, class_iri: str, **kwargs) -> ClassTable:
    subjects, triples = triples_from_rows(rows, class_iri)
    kwargs.setdefault("keep_raw", True)
    return build_table(triples, subjects, class_iri=class_iri, **kwargs)


@pytest.fixture
def nerve_table() -> ClassTable:
    return build_from_rows(NERVE_ROWS, NERVE_CLASS)


@pytest.fixture
def film_table() -> ClassTable:
    return build_from_rows(FILM_ROWS, FILM_CLASS)


@pytest.fixture
def dup_table() -> ClassTable:
    # every row identical across every property: no subset of any size
    # distinguishes anything
    rows = {f"d{i}": {"p": ["same"], "q": ["alike"]} for i in range(4)}
    return build_from_rows(rows, EX + "Dup")


def random_rows(rng: random.Random, *, subjects: int, props: int,
                pool: int = 4, null_p: float = 0.25,
                multi_p: float = 0.1) -> dict:
    """Value table with repeated values, missing cells, and multi-valued cells."""
    rows = {}
    for i in range(subjects):
        cells = {}
        for j in range(props):
            if rng.random() < null_p:
                continue
            values = {f"v{rng.randrange(pool)}"}
            while rng.random() < multi_p:
                values.add(f"v{rng.randrange(pool)}")
            cells[f"p{j}"] = sorted(values)
        rows[f"s{i:03d}"] = cells
    return rows


def random_table(seed: int, *, subjects: int | None = None,
                 props: int | None = None, **kwargs) -> ClassTable:
    rng = random.Random(seed)
    subjects = subjects if subjects is not None else rng.randint(1, 30)
    props = props if props is not None else rng.randint(1, 6)
    rows = random_rows(rng, subjects=subjects, props=props, **kwargs)
    return build_from_rows(rows, EX + "Rand")
