"""Run reports: stable JSON documents, TSV key listings, human summaries.

Scores and ratios are carried as exact rational strings next to fixed
5-decimal renderings; the decimals are presentation only. Timing and
memory numbers live in a separate "perf" section so report comparison can
ignore them wholesale.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .search import SearchReport

_DECIMALS = 5


def decimal_str(value: Fraction, places: int = _DECIMALS) -> str:
    return f"{float(value):.{places}f}"


def percent_str(value: Fraction) -> str:
    return f"{float(value) * 100:.2f}%"


def key_entries(report: SearchReport) -> list[dict]:
    """Discovered sets as dicts, sorted by (size asc, score desc, lex IRIs)."""
    ordered = sorted(report.solution_iris(),
                     key=lambda pair: (len(pair[0]), -pair[1].score, pair[0]))
    return [
        {
            "size": len(iris),
            "properties": list(iris),
            "score": str(result.score),
            "score_decimal": decimal_str(result.score),
            "distinguishable": result.distinguishable,
        }
        for iris, result in ordered
    ]


def build_report(manifest: dict, report: SearchReport, *, subjects: int) -> dict:
    """Assemble the full report document (JSON-serializable)."""
    return {
        "manifest": dict(manifest),
        "results": {
            "subjects": subjects,
            "universe_size": report.universe_size,
            "keys": key_entries(report),
            "vnodes": report.vnodes,
            "reduction_ratio": str(report.reduction_ratio),
            "reduction_ratio_percent": percent_str(report.reduction_ratio),
            "terminated_early": report.terminated_early,
            "termination_reason": report.termination_reason,
        },
        "perf": {
            "timings_ms": {k: round(v, 3) for k, v in report.timings_ms.items()},
            "peak_memory_bytes": report.peak_memory_bytes,
        },
    }


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_tsv(doc: dict) -> str:
    """Key listing only; one row per discovered set, already sorted."""
    lines = ["size\tproperties\tscore\tscore_exact"]
    for entry in doc["results"]["keys"]:
        lines.append("\t".join([
            str(entry["size"]),
            " ".join(entry["properties"]),  # IRIs cannot contain spaces
            entry["score_decimal"],
            entry["score"],
        ]))
    return "\n".join(lines) + "\n"


def render_human(doc: dict) -> str:
    results = doc["results"]
    manifest = doc["manifest"]
    lines = [
        f"class {manifest.get('class', '?')}: "
        f"{results['subjects']} subjects, {results['universe_size']} properties"
    ]
    keys = results["keys"]
    if keys:
        lines.append(f"minimal sets at alpha {manifest.get('alpha', '1')}:")
        for entry in keys:
            lines.append(f"  size {entry['size']}  score {entry['score_decimal']}  "
                         + " ".join(entry["properties"]))
    else:
        lines.append(f"no sets reach alpha {manifest.get('alpha', '1')}")
    lines.append(f"scored nodes: {results['vnodes']}"
                 f" (reduction ratio {results['reduction_ratio_percent']})")
    if results["terminated_early"]:
        lines.append(f"warning: terminated early, {results['termination_reason']}")
    timings = doc["perf"]["timings_ms"]
    if timings:
        shown = ", ".join(f"{name} {timings[name]:.1f} ms" for name in sorted(timings))
        lines.append(f"timings: {shown}")
    return "\n".join(lines) + "\n"


def comparable_view(doc: dict, *, ignore_backend: bool = False) -> dict:
    """The report minus fields expected to vary between equivalent runs.

    Drops the perf section and output paths; with ignore_backend also the
    backend choice, for memory-vs-disk equivalence checks.
    """
    manifest = {k: v for k, v in doc["manifest"].items()
                if k not in ("report", "index")
                and not (ignore_backend and k == "backend")}
    return {"manifest": manifest, "results": doc["results"]}
