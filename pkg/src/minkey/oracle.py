"""Brute-force reference implementation for cross-checking the engine.

Deliberately avoids the signature and digest pathway: cells are compared
as the raw sorted tuples of their object terms, so any bug in escaping,
hashing, interning, or the kernels shows up as a disagreement. Every
nonempty property subset is scored; minimal threshold-passing sets come
from explicit subset checks. Exponential and happily so; guarded to small
universes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .table import ClassTable

MAX_UNIVERSE = 20


@dataclass(frozen=True, slots=True)
class OracleResult:
    """Exhaustive score map plus the minimal sets meeting the threshold."""

    scores: dict[frozenset[str], Fraction]  # every nonempty property subset
    minimal: list[frozenset[str]]  # minimal sets with score >= alpha
    alpha: Fraction
    total: int  # |S|


def brute_force(table: ClassTable, alpha: Fraction | int = 1) -> OracleResult:
    """Score all nonempty property subsets and list the minimal ones >= alpha."""
    alpha = Fraction(alpha)
    n_props = table.n_properties
    if n_props > MAX_UNIVERSE:
        raise ValueError(
            f"{n_props} properties is past the brute-force guard of "
            f"{MAX_UNIVERSE}; use the search engine for universes this large")
    if not table.has_raw():
        raise ValueError("oracle needs raw object sets; build the table with keep_raw=True")

    total = table.n_subjects
    columns = [[table.cell_objects(row, col) for row in range(total)]
               for col in range(n_props)]

    scores: dict[frozenset[str], Fraction] = {}
    by_size: list[list[frozenset[str]]] = [[] for _ in range(n_props + 1)]
    for size in range(1, n_props + 1):
        for combo in combinations(range(n_props), size):
            key = frozenset(table.properties[c] for c in combo)
            scores[key] = _subset_score(columns, combo, total)
            by_size[size].append(key)

    minimal: list[frozenset[str]] = []
    for size in range(1, n_props + 1):
        for key in by_size[size]:
            if scores[key] >= alpha and not any(m <= key for m in minimal):
                minimal.append(key)
    return OracleResult(scores=scores, minimal=minimal, alpha=alpha, total=total)


def _subset_score(columns, combo, total) -> Fraction:
    if total == 0:
        return Fraction(1)  # vacuous
    seen: dict[tuple, int] = {}
    rows = []
    for row in range(total):
        tup = tuple(columns[c][row] for c in combo)
        rows.append(tup)
        seen[tup] = seen.get(tup, 0) + 1
    distinguishable = sum(1 for tup in rows if seen[tup] == 1)
    return Fraction(distinguishable, total)


def audit_monotonicity(result: OracleResult) -> list[str]:
    """Check key/non-key monotonicity over the full score map.

    Walks every immediate-superset edge: a key extended by one property
    must stay a key; equivalently a non-key shrunk by one property must
    stay a non-key. Chains of single additions cover all superset pairs.
    Returns human-readable descriptions of violations (expected empty).
    """
    properties = set()
    for key in result.scores:
        properties |= key
    violations = []
    for subset, score in result.scores.items():
        if score != 1:
            continue
        for extra in properties - subset:
            superset = subset | {extra}
            if result.scores[superset] != 1:
                violations.append(
                    f"key {sorted(subset)} but extension {sorted(superset)} "
                    f"scores {result.scores[superset]}")
    return violations
