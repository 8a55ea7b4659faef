"""Line-oriented N-Triples reader/writer and class-instance selection.

Only the N-Triples subset is accepted: one statement per line,
`<s> <p> <o> .`, IRIs in angle brackets, literals in double quotes with an
optional `^^<datatype>` or `@lang` suffix, blank nodes as `_:label`, and
comment lines starting with `#`. Lexical forms are unescaped on input and
kept verbatim from then on; serialization re-escapes only what the grammar
forces (quote, backslash, newline, carriage return, and characters an IRI
cannot carry raw).

No RDF 1.1 term-level normalization is applied: `"x"` and
`"x"^^<...#string>` stay distinct terms, and language tags keep their
original case.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO


RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"

_IRI = r'<([^<>\x00-\x20]*)>'
_BNODE = r'_:([A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)'
_LIT = r'"((?:[^"\\\n\r]|\\.)*)"(?:\^\^<([^<>\x00-\x20]*)>|@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*))?'

_LINE_RE = re.compile(
    r'^[ \t]*'
    r'(?:' + _IRI + r'|' + _BNODE + r')'
    r'[ \t]+' + _IRI +
    r'[ \t]+'
    r'(?:' + _IRI + r'|' + _BNODE + r'|' + _LIT + r')'
    r'[ \t]*\.[ \t]*(?:#.*)?$'
)

_ECHARS = {
    't': '\t', 'b': '\b', 'n': '\n', 'r': '\r', 'f': '\f',
    '"': '"', "'": "'", '\\': '\\',
}
_ECHAR_OUT = {'\\': '\\\\', '"': '\\"', '\n': '\\n', '\r': '\\r'}

# Characters an IRIREF cannot contain raw; re-escaped with \u on output.
_IRI_FORBIDDEN = set('<>"{}|^`\\') | {chr(c) for c in range(0x21)}


class ParseError(ValueError):
    """Malformed N-Triples input; carries line number and a short excerpt."""

    def __init__(self, line_no: int, line: str, reason: str = "malformed statement"):
        excerpt = line.rstrip("\n")
        if len(excerpt) > 60:
            excerpt = excerpt[:57] + "..."
        super().__init__(f"line {line_no}: {reason}: {excerpt!r}")
        self.line_no = line_no
        self.excerpt = excerpt


@dataclass(frozen=True, slots=True)
class Term:
    """An object-position RDF term: IRI, blank node, or literal."""

    kind: str  # "iri" | "blank" | "literal"
    value: str
    datatype: str | None = None
    lang: str | None = None

    def nt(self) -> str:
        if self.kind == "iri":
            return f"<{escape_iri(self.value)}>"
        if self.kind == "blank":
            return f"_:{self.value}"
        body = f'"{escape_literal(self.value)}"'
        if self.datatype is not None:
            return f"{body}^^<{escape_iri(self.datatype)}>"
        if self.lang is not None:
            return f"{body}@{self.lang}"
        return body


@dataclass(frozen=True, slots=True)
class Triple:
    """One (subject, predicate, object) statement."""

    subject: str
    predicate: str
    obj: Term

    def nt(self) -> str:
        if self.subject.startswith("_:"):
            subj = self.subject
        else:
            subj = f"<{escape_iri(self.subject)}>"
        return f"{subj} <{escape_iri(self.predicate)}> {self.obj.nt()} ."


@dataclass(frozen=True, slots=True)
class ClassSelection:
    """Which instances to pull: members of `class_iri` via `type_predicate`."""

    class_iri: str
    type_predicate: str = RDF_TYPE


@dataclass
class ParseStats:
    """Counters filled in by the parser; `skipped` only grows in lenient mode."""

    lines: int = 0
    triples: int = 0
    skipped: int = 0
    skipped_lines: list[int] = field(default_factory=list)


def _unescape(raw: str, line_no: int, line: str, echars: bool) -> str:
    if '\\' not in raw:
        return raw
    out: list[str] = []
    i, n = 0, len(raw)
    while i < n:
        ch = raw[i]
        if ch != '\\':
            out.append(ch)
            i += 1
            continue
        if i + 1 >= n:
            raise ParseError(line_no, line, "dangling escape")
        esc = raw[i + 1]
        if esc == 'u' or esc == 'U':
            width = 4 if esc == 'u' else 8
            hexpart = raw[i + 2:i + 2 + width]
            if len(hexpart) < width:
                raise ParseError(line_no, line, "truncated \\%s escape" % esc)
            try:
                out.append(chr(int(hexpart, 16)))
            except ValueError:
                raise ParseError(line_no, line, "bad hex in \\%s escape" % esc) from None
            i += 2 + width
        elif echars and esc in _ECHARS:
            out.append(_ECHARS[esc])
            i += 2
        else:
            raise ParseError(line_no, line, f"invalid escape \\{esc}")
    return ''.join(out)


def escape_literal(value: str) -> str:
    return ''.join(_ECHAR_OUT.get(ch, ch) for ch in value)


def escape_iri(value: str) -> str:
    if not (_IRI_FORBIDDEN & set(value)):
        return value
    out = []
    for ch in value:
        if ch in _IRI_FORBIDDEN:
            cp = ord(ch)
            out.append(f"\\u{cp:04X}" if cp <= 0xFFFF else f"\\U{cp:08X}")
        else:
            out.append(ch)
    return ''.join(out)


def parse_line(line: str, line_no: int = 1) -> Triple | None:
    """Parse one physical line; returns None for blank/comment lines."""
    stripped = line.strip()
    if not stripped or stripped.startswith('#'):
        return None
    m = _LINE_RE.match(line.rstrip('\n').rstrip('\r'))
    if m is None:
        raise ParseError(line_no, line)
    (s_iri, s_bnode, p_iri,
     o_iri, o_bnode, o_lex, o_dt, o_lang) = m.groups()

    if s_iri is not None:
        subject = _unescape(s_iri, line_no, line, echars=False)
    else:
        subject = f"_:{s_bnode}"
    predicate = _unescape(p_iri, line_no, line, echars=False)
    if not predicate or (s_iri is not None and not subject):
        raise ParseError(line_no, line, "empty IRI")

    if o_iri is not None:
        obj = Term("iri", _unescape(o_iri, line_no, line, echars=False))
    elif o_bnode is not None:
        obj = Term("blank", o_bnode)
    else:
        lex = _unescape(o_lex, line_no, line, echars=True)
        if o_dt is not None:
            obj = Term("literal", lex, datatype=_unescape(o_dt, line_no, line, echars=False))
        else:
            obj = Term("literal", lex, lang=o_lang)
    return Triple(subject, predicate, obj)


def parse_ntriples(
    source: Iterable[str] | TextIO,
    mode: str = "strict",
    stats: ParseStats | None = None,
) -> Iterator[Triple]:
    """Yield one Triple per statement line, in input order.

    mode="strict" raises ParseError on the first malformed line;
    mode="lenient" skips malformed lines, counting them in `stats`.
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"unknown parse mode {mode!r}")
    for line_no, line in enumerate(source, start=1):
        if stats is not None:
            stats.lines += 1
        try:
            triple = parse_line(line, line_no)
        except ParseError:
            if mode == "strict":
                raise
            if stats is not None:
                stats.skipped += 1
                stats.skipped_lines.append(line_no)
            continue
        if triple is not None:
            if stats is not None:
                stats.triples += 1
            yield triple


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    return ''.join(t.nt() + '\n' for t in triples)


def select_class_instances(
    triples: Iterable[Triple], sel: ClassSelection
) -> tuple[set[str], list[Triple]]:
    """Split out the instances of one class and all their outgoing edges.

    Membership triples (s, type_predicate, class_iri) count as ordinary
    properties of the instance and stay in the returned triple list.
    """
    realized = list(triples)
    subjects = {
        t.subject
        for t in realized
        if t.predicate == sel.type_predicate
        and t.obj.kind == "iri"
        and t.obj.value == sel.class_iri
    }
    class_triples = [t for t in realized if t.subject in subjects]
    return subjects, class_triples


def iter_class_triples(
    path: str,
    sel: ClassSelection,
    mode: str = "strict",
    stats: ParseStats | None = None,
) -> tuple[set[str], Iterator[Triple]]:
    """Two-pass streaming variant of select_class_instances for large files.

    The first pass only collects the member subjects, so the full triple
    list is never held in memory.
    """
    subjects: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for t in parse_ntriples(fh, mode=mode):
            if (t.predicate == sel.type_predicate
                    and t.obj.kind == "iri"
                    and t.obj.value == sel.class_iri):
                subjects.add(t.subject)

    def _second_pass() -> Iterator[Triple]:
        with open(path, encoding="utf-8") as fh:
            for t in parse_ntriples(fh, mode=mode, stats=stats):
                if t.subject in subjects:
                    yield t

    return subjects, _second_pass()
