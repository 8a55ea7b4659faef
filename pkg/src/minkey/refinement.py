"""Score-ordered property universe and the upward refinement operator.

Properties are sorted ascending by singleton score (ties broken by
bytewise-lexicographic IRI so runs are reproducible); property sets are
strictly increasing index tuples into that ordering. Refining a set adds
one property with index strictly below the set's minimum index, which
makes every nonempty subset reachable from the empty set by exactly one
chain: its unique parent is the set minus its minimum element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .scoring import ScoreResult, compute_score
from .table import ClassTable


@dataclass(frozen=True, slots=True)
class PropertySet:
    """Immutable set of universe indices, kept sorted."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError(f"indices must be strictly increasing: {self.indices}")

    @classmethod
    def of(cls, indices: Iterable[int]) -> "PropertySet":
        return cls(tuple(sorted(set(indices))))

    @property
    def min_index(self) -> int:
        if not self.indices:
            raise ValueError("empty set has no minimum index")
        return self.indices[0]

    @property
    def size(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, index: int) -> bool:
        return index in self.indices

    def is_subset(self, other: "PropertySet") -> bool:
        return set(self.indices) <= set(other.indices)

    def intersects(self, other: "PropertySet") -> bool:
        return bool(set(self.indices) & set(other.indices))


EMPTY_SET = PropertySet(())


@dataclass(frozen=True, slots=True)
class PropertyUniverse:
    """Score-ascending property ordering with cached singleton scores.

    `columns[i]` is the table column behind ordered index i, so index
    order and table order are decoupled.
    """

    properties: tuple[str, ...]  # IRIs in ascending singleton-score order
    columns: tuple[int, ...]  # table column per ordered index
    scores: tuple[ScoreResult, ...]  # singleton score per ordered index

    def __post_init__(self) -> None:
        if not (len(self.properties) == len(self.columns) == len(self.scores)):
            raise ValueError("universe fields must have equal length")
        if any(a.score > b.score for a, b in zip(self.scores, self.scores[1:])):
            raise ValueError("singleton scores must be ascending")

    @property
    def size(self) -> int:
        return len(self.properties)

    def __len__(self) -> int:
        return len(self.properties)

    def iris(self, pset: PropertySet) -> tuple[str, ...]:
        """The set's property IRIs, in index order."""
        return tuple(self.properties[i] for i in pset.indices)

    def table_columns(self, pset: PropertySet) -> tuple[int, ...]:
        return tuple(self.columns[i] for i in pset.indices)

    def filtered(self, keep: Iterable[int]) -> "PropertyUniverse":
        """Sub-universe of the given ordered indices (relative order kept).

        Cached scores carry over; nothing is rescored.
        """
        kept = sorted(set(keep))
        return PropertyUniverse(
            properties=tuple(self.properties[i] for i in kept),
            columns=tuple(self.columns[i] for i in kept),
            scores=tuple(self.scores[i] for i in kept),
        )


def order_universe(table: ClassTable, *,
                   scores: list[ScoreResult] | None = None) -> PropertyUniverse:
    """Sort the table's properties ascending by singleton score.

    Equal scores fall back to bytewise-lexicographic IRI order. Precomputed
    singleton scores (one per table column) may be passed in to avoid
    rescoring.
    """
    if scores is None:
        scores = [compute_score(table, [col]) for col in range(table.n_properties)]
    elif len(scores) != table.n_properties:
        raise ValueError("need one singleton score per table property")
    order = sorted(range(table.n_properties),
                   key=lambda col: (scores[col].score, table.properties[col]))
    return PropertyUniverse(
        properties=tuple(table.properties[col] for col in order),
        columns=tuple(order),
        scores=tuple(scores[col] for col in order),
    )


def refine(universe: PropertyUniverse, pset: PropertySet) -> list[PropertySet]:
    """One refinement step: all extensions below the set's minimum index.

    The empty set refines to every singleton. Output is ordered by the
    added index, ascending.
    """
    if not pset.indices:
        return [PropertySet((i,)) for i in range(universe.size)]
    return [PropertySet((i,) + pset.indices) for i in range(pset.min_index)]


def compare_sets(universe: PropertyUniverse, a: PropertySet, b: PropertySet) -> str:
    """Quasi-order by minimum singleton score: "le", "ge", or "both".

    Not antisymmetric: distinct sets sharing a minimum score compare
    "both". Defined only for nonempty sets.
    """
    if not a.indices or not b.indices:
        raise ValueError("comparison is defined for nonempty sets only")
    # scores ascend with index, so the minimum score sits at the minimum index
    sa = universe.scores[a.min_index].score
    sb = universe.scores[b.min_index].score
    if sa == sb:
        return "both"
    return "le" if sa < sb else "ge"
