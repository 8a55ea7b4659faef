"""Discriminability scores and almost-key threshold arithmetic.

The score of a property set is the fraction of subjects whose combined
object-set tuple over those properties occurs exactly once (frequency-1
rows), as an exact rational. Note this is not the number of distinct rows:
a value shared by two subjects distinguishes neither, so a duplicated pair
contributes 0, not 1. The distinct-row count is still reported as an
auxiliary statistic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .table import ClassTable


@dataclass(frozen=True, slots=True)
class ScoreResult:
    """Score of one property set over one table."""

    score: Fraction
    distinguishable: int  # frequency-1 row count (the numerator)
    total: int  # |S|
    distinct_rows: int  # auxiliary: number of distinct row tuples
    vacuous: bool = False  # |S| = 0, score 1 by convention


@dataclass(frozen=True, slots=True)
class AlmostKeySpec:
    """Almost-key threshold: score >= alpha admits a set."""

    alpha: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must be within [0, 1], got {self.alpha}")

    @classmethod
    def for_k(cls, k: int, total: int) -> "AlmostKeySpec":
        """Budget of k exception subjects out of `total`."""
        return cls(alpha_for_k(k, total))


def alpha_for_k(k: int, total: int) -> Fraction:
    """Threshold (|S| - k) / |S| admitting keys with at most k exceptions."""
    if total <= 0:
        raise ValueError(f"total subjects must be positive, got {total}")
    if not 0 <= k <= total:
        raise ValueError(f"k must be within [0, {total}], got {k}")
    return Fraction(total - k, total)


def compute_score(table: ClassTable, props: Iterable[str | int]) -> ScoreResult:
    """Score a property set (referenced by IRI or column index) on a table.

    The empty set scores 0 when the table has more than one row and 1 when
    it has exactly one; an empty table scores 1 vacuously.
    """
    cols = table.resolve_columns(props)
    total = table.n_subjects
    if total == 0:
        return ScoreResult(Fraction(1), 0, 0, 0, vacuous=True)
    freq1, groups = table.group_stats(cols)
    return ScoreResult(Fraction(freq1, total), freq1, total, groups)


def is_key(result: ScoreResult) -> bool:
    """Exact rational comparison; no floating tolerance."""
    return result.score == 1


def is_almost_key(result: ScoreResult, spec: AlmostKeySpec) -> bool:
    return result.score >= spec.alpha
