"""Command-line front end: discover, oracle, gen, stats.

Exit codes: 0 success (including an empty result), 2 unusable input
(missing file, bad arguments), 3 parse failure in strict mode.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import datagen, index_io, oracle, report
from .ntriples import ClassSelection, ParseError, ParseStats, iter_class_triples
from .scoring import compute_score
from .search import SearchConfig, find_keys
from .table import MEMORY, ClassTable, StorageBackend, build_table

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PARSE = 3

INDEX_DIR_ENV = "MINKEY_INDEX_DIR"


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _planted(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated property positions, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minkey",
        description="Minimal-key and almost-key discovery over RDF class instances")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_flags(p):
        p.add_argument("--input", required=True, help="N-Triples file")
        p.add_argument("--class", dest="class_iri", required=True,
                       help="class IRI whose instances are analyzed")
        p.add_argument("--lenient", action="store_true",
                       help="skip malformed lines instead of failing")

    disc = sub.add_parser("discover", help="search for minimal keys / almost-keys")
    add_input_flags(disc)
    disc.add_argument("--alpha", type=_rational, default=Fraction(1),
                      help="score threshold (rational or decimal, default 1)")
    disc.add_argument("--tau", type=_rational, default=Fraction(1, 1000),
                      help="fast-mode singleton floor (default 0.001)")
    disc.add_argument("--fast", action="store_true",
                      help="prune aggressively; sound but not exhaustive")
    disc.add_argument("--mode", choices=("all", "first"), default="all")
    disc.add_argument("--backend", choices=("memory", "disk"), default="memory")
    disc.add_argument("--index", help="index file path (disk backend)")
    disc.add_argument("--score-mode", choices=("exact", "hashed"), default="exact")
    disc.add_argument("--report", help="write the report to this file")
    disc.add_argument("--format", choices=("json", "tsv"), default="json")
    disc.add_argument("--workers", type=int, default=0,
                      help="score children in parallel with this many threads")
    disc.set_defaults(func=cmd_discover)

    orc = sub.add_parser("oracle", help="exhaustive brute-force reference run")
    add_input_flags(orc)
    orc.add_argument("--alpha", type=_rational, default=Fraction(1))
    orc.add_argument("--report", help="write the report to this file")
    orc.add_argument("--format", choices=("json", "tsv"), default="json")
    orc.set_defaults(func=cmd_oracle)

    gen = sub.add_parser("gen", help="generate a synthetic dataset")
    gen.add_argument("--out", required=True, help="output N-Triples path")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--subjects", type=int, required=True)
    gen.add_argument("--properties", type=int, required=True)
    gen.add_argument("--null-rate", type=float, default=0.0)
    gen.add_argument("--duplicate-rate", type=float, default=0.0)
    gen.add_argument("--multi-rate", type=float, default=0.0)
    gen.add_argument("--planted", type=_planted,
                     help="property positions forming a planted key, e.g. 0,1,2")
    gen.add_argument("--class", dest="class_iri",
                     default="http://example.org/Thing")
    gen.set_defaults(func=cmd_gen)

    stats = sub.add_parser("stats", help="per-property coverage and singleton scores")
    add_input_flags(stats)
    stats.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def _load_table(args, backend: StorageBackend = MEMORY, *,
                score_mode: str = "exact", keep_raw: bool = False):
    """Stream the input into a ClassTable, or return an exit code on failure."""
    path = Path(args.input)
    if not path.exists():
        print(f"error: input file does not exist: {path}", file=sys.stderr)
        return EXIT_INPUT
    mode = "lenient" if args.lenient else "strict"
    stats = ParseStats()
    try:
        subjects, triples = iter_class_triples(
            str(path), ClassSelection(args.class_iri), mode=mode, stats=stats)
        if not subjects:
            print(f"warning: no instances of {args.class_iri} in {path}",
                  file=sys.stderr)
        table = build_table(triples, subjects, backend,
                            score_mode=score_mode, keep_raw=keep_raw,
                            class_iri=args.class_iri)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if stats.skipped:
        print(f"note: skipped {stats.skipped} malformed line(s)", file=sys.stderr)
    return table


def _default_index_path(input_path: str) -> Path:
    stem = Path(input_path).stem or "table"
    directory = os.environ.get(INDEX_DIR_ENV) or Path(input_path).parent
    return Path(directory) / f"{stem}.mkidx"


def _write_report(doc: dict, args) -> None:
    if not args.report:
        return
    text = report.render_tsv(doc) if args.format == "tsv" else report.render_json(doc)
    Path(args.report).write_text(text, encoding="utf-8")


def cmd_discover(args) -> int:
    if args.backend == "disk":
        index_path = Path(args.index) if args.index else _default_index_path(args.input)
        backend = StorageBackend("disk", index_path)
    else:
        backend = MEMORY
    t0 = time.perf_counter()
    try:
        table = _load_table(args, backend, score_mode=args.score_mode)
    except index_io.IndexFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not isinstance(table, ClassTable):
        return table
    index_ms = (time.perf_counter() - t0) * 1e3

    config = SearchConfig(alpha=args.alpha, tau=args.tau, fast=args.fast,
                          mode=args.mode, workers=args.workers)
    result = find_keys(table, config)
    result.timings_ms["index_build"] = index_ms

    manifest = {
        "input": str(args.input),
        "class": args.class_iri,
        "alpha": str(args.alpha),
        "tau": str(args.tau),
        "fast": args.fast,
        "mode": args.mode,
        "backend": args.backend,
        "score_mode": args.score_mode,
        "index": str(args.index) if args.index else None,
        "report": args.report,
        "format": args.format,
        "workers": args.workers,
    }
    doc = report.build_report(manifest, result, subjects=table.n_subjects)
    _write_report(doc, args)
    sys.stdout.write(report.render_human(doc))
    return EXIT_OK


def cmd_oracle(args) -> int:
    table = _load_table(args, keep_raw=True)
    if not isinstance(table, ClassTable):
        return table
    try:
        result = oracle.brute_force(table, args.alpha)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    entries = sorted(
        ({"size": len(props), "properties": sorted(props),
          "score": str(result.scores[props]),
          "score_decimal": report.decimal_str(result.scores[props])}
         for props in result.minimal),
        key=lambda e: (e["size"], -Fraction(e["score"]), e["properties"]))
    doc = {
        "manifest": {"input": str(args.input), "class": args.class_iri,
                     "alpha": str(args.alpha), "mode": "oracle"},
        "results": {"subjects": result.total, "universe_size": table.n_properties,
                    "minimal": entries},
    }
    if args.report:
        if args.format == "tsv":
            lines = ["size\tproperties\tscore\tscore_exact"]
            lines += ["\t".join([str(e["size"]), " ".join(e["properties"]),
                                 e["score_decimal"], e["score"]])
                      for e in entries]
            Path(args.report).write_text("\n".join(lines) + "\n", encoding="utf-8")
        else:
            Path(args.report).write_text(report.render_json(doc), encoding="utf-8")
    for entry in entries:
        sys.stdout.write(f"size {entry['size']}  score {entry['score_decimal']}  "
                         + " ".join(entry["properties"]) + "\n")
    if not entries:
        sys.stdout.write(f"no sets reach alpha {args.alpha}\n")
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        spec = datagen.GenSpec(
            seed=args.seed,
            subjects=args.subjects,
            properties=args.properties,
            null_rate=args.null_rate,
            duplicate_rate=args.duplicate_rate,
            multi_rate=args.multi_rate,
            planted_key=args.planted,
            class_iri=args.class_iri,
        )
        count = datagen.generate_to(spec, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {count} triples to {args.out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    table = _load_table(args)
    if not isinstance(table, ClassTable):
        return table
    print(f"# subjects {table.n_subjects}, properties {table.n_properties}")
    print("property\tcoverage\tsingleton_score")
    for prop in sorted(table.properties):
        col = table.property_index(prop)
        cov = table.coverage(col)
        score = compute_score(table, [col]).score
        print(f"{prop}\t{report.decimal_str(cov)}\t{report.decimal_str(score)}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
