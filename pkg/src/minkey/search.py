"""Best-first discovery of minimal keys and almost-keys.

The driver scores the full property set first (scoring below the threshold
means no key can exist, so the search ends after that single evaluation),
orders the universe by singleton score, then expands sets from a
max-priority queue. A child scoring at or above the threshold is recorded
as a solution and never enqueued: all its supersets are keys by
monotonicity and none of them can be minimal, so its whole refinement
subtree is skipped. Every score is memoized by column set; vnodes counts
each property set scored exactly once, including the pre-check and the
singleton evaluations done for ordering.

The optional fast mode additionally drops properties whose singleton score
is at or below tau before the search and discards queued or generated sets
that share a property with an already-found solution. That trades
exhaustiveness for speed and solution diversity: fast-mode output is sound
(every reported set meets the threshold) but not complete.
"""

from __future__ import annotations

import heapq
import resource
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .refinement import PropertySet, PropertyUniverse, order_universe, refine
from .scoring import ScoreResult, compute_score
from .table import ClassTable


@dataclass(frozen=True, slots=True)
class SearchConfig:
    alpha: Fraction = Fraction(1)
    tau: Fraction = Fraction(1, 1000)
    fast: bool = False
    mode: str = "all"  # "all" | "first"
    max_nodes: int | None = None
    time_budget_s: float | None = None
    workers: int = 0  # >1 scores the children of one expansion in parallel

    def __post_init__(self) -> None:
        if self.mode not in ("all", "first"):
            raise ValueError(f"mode must be all or first, got {self.mode!r}")
        if not 0 <= self.tau <= self.alpha <= 1:
            raise ValueError(
                f"need 0 <= tau <= alpha <= 1, got tau={self.tau}, alpha={self.alpha}")
        if self.max_nodes is not None and self.max_nodes < 1:
            raise ValueError("max_nodes must be at least 1")
        if self.workers < 0:
            raise ValueError("workers must be non-negative")


@dataclass(slots=True)
class SearchReport:
    """Outcome of one search run. Timing fields are informative only."""

    solutions: list[tuple[PropertySet, ScoreResult]]
    universe: PropertyUniverse  # the ordering searched (tau-filtered in fast mode)
    universe_size: int  # full table property count; the reduction-ratio base
    vnodes: int
    reduction_ratio: Fraction
    terminated_early: bool = False
    termination_reason: str | None = None
    timings_ms: dict[str, float] = field(default_factory=dict)
    peak_memory_bytes: int | None = None
    config: SearchConfig | None = None

    def solution_iris(self) -> list[tuple[tuple[str, ...], ScoreResult]]:
        """Solutions as sorted property-IRI tuples, in discovery order."""
        return [(tuple(sorted(self.universe.iris(pset))), result)
                for pset, result in self.solutions]


def reduction_ratio(vnodes: int, universe_size: int) -> Fraction:
    """Fraction of the nonempty-subset lattice never scored."""
    if universe_size < 1:
        raise ValueError(f"universe size must be at least 1, got {universe_size}")
    lattice = 2 ** universe_size - 1
    if not 0 <= vnodes <= lattice:
        raise ValueError(f"vnodes must be within [0, {lattice}], got {vnodes}")
    return 1 - Fraction(vnodes, lattice)


def minimality_filter(solutions: list[PropertySet]) -> list[PropertySet]:
    """Drop every set that strictly contains another solution."""
    kept = []
    for cand in solutions:
        if not any(other.is_subset(cand) and other != cand
                   for other in solutions):
            kept.append(cand)
    return kept


def find_keys(table: ClassTable, config: SearchConfig | None = None) -> SearchReport:
    """Find all minimal property sets scoring at least alpha (mode "all"),
    or one such set (mode "first")."""
    config = config or SearchConfig()
    alpha = config.alpha
    n_props = table.n_properties

    memo: dict[frozenset[int], ScoreResult] = {}
    vnodes = 0

    def scored(cols: tuple[int, ...]) -> ScoreResult:
        nonlocal vnodes
        key = frozenset(cols)
        result = memo.get(key)
        if result is None:
            result = compute_score(table, cols)
            memo[key] = result
            vnodes += 1
        return result

    def make_report(solutions, universe, *, early=False, reason=None,
                    timings=None) -> SearchReport:
        rr = reduction_ratio(vnodes, n_props) if n_props else Fraction(0)
        peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
        return SearchReport(
            solutions=solutions,
            universe=universe,
            universe_size=n_props,
            vnodes=vnodes,
            reduction_ratio=rr,
            terminated_early=early,
            termination_reason=reason,
            timings_ms=timings or {},
            peak_memory_bytes=peak,
            config=config,
        )

    t0 = time.perf_counter()
    # no subset can beat the full property set, so one evaluation settles
    # whether anything is worth searching
    if scored(tuple(range(n_props))).score < alpha:
        empty_universe = PropertyUniverse((), (), ())
        return make_report([], empty_universe,
                           timings={"ordering": 0.0,
                                    "search": (time.perf_counter() - t0) * 1e3})

    singleton_scores = [scored((col,)) for col in range(n_props)]
    universe = order_universe(table, scores=singleton_scores)
    if config.fast:
        universe = universe.filtered(
            i for i in range(universe.size) if universe.scores[i].score > config.tau)
    t_ordered = time.perf_counter()

    # entries: (-score, cardinality, index tuple); ties pop the smaller
    # set first, then lexicographically smaller indices
    heap: list[tuple[Fraction, int, tuple[int, ...]]] = [(Fraction(0), 0, ())]
    solutions: list[PropertySet] = []
    results: dict[PropertySet, ScoreResult] = {}
    solution_props: set[int] = set()  # union of solution indices, fast mode
    early = False
    reason = None

    pool = ThreadPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        while heap:
            if config.max_nodes is not None and vnodes >= config.max_nodes:
                early, reason = True, f"visited-node limit {config.max_nodes} reached"
                break
            if (config.time_budget_s is not None
                    and time.perf_counter() - t_ordered > config.time_budget_s):
                early, reason = True, f"time budget {config.time_budget_s}s exhausted"
                break
            _, _, indices = heapq.heappop(heap)
            pset = PropertySet(indices)
            if config.fast and any(pset.intersects(sol) for sol in solutions):
                continue  # lazily evicted: shares a property with a found key
            children = refine(universe, pset)
            if config.fast and solution_props:
                children = [ch for ch in children
                            if ch.min_index not in solution_props]

            pending = [ch for ch in children
                       if frozenset(universe.table_columns(ch)) not in memo]
            batch: dict[PropertySet, ScoreResult] = {}
            if pool is not None and len(pending) > 1:
                cols = [universe.table_columns(ch) for ch in pending]
                batch = dict(zip(pending, pool.map(
                    lambda c: compute_score(table, c), cols)))

            for child in children:
                if config.fast and child.min_index in solution_props:
                    continue  # a batch mate already claimed this property
                key = frozenset(universe.table_columns(child))
                result = memo.get(key)
                if result is None:
                    result = batch.get(child) or compute_score(
                        table, universe.table_columns(child))
                    memo[key] = result
                    vnodes += 1
                if result.score >= alpha:
                    # supersets cannot be minimal; prune the whole subtree
                    # by never enqueueing the solution
                    if config.mode == "first":
                        final = _minimize(child, universe, alpha, scored)
                        timings = _timings(t0, t_ordered)
                        return make_report(
                            [(final, memo[frozenset(universe.table_columns(final))])],
                            universe, timings=timings)
                    solutions.append(child)
                    results[child] = result
                    solution_props.update(child.indices)
                else:
                    heapq.heappush(
                        heap, (-result.score, len(child.indices), child.indices))
    finally:
        if pool is not None:
            pool.shutdown(wait=False)

    minimal = minimality_filter(solutions)
    return make_report([(pset, results[pset]) for pset in minimal], universe,
                       early=early, reason=reason, timings=_timings(t0, t_ordered))


def _minimize(pset: PropertySet, universe: PropertyUniverse, alpha: Fraction,
              scored) -> PropertySet:
    """Greedily shrink a solution until no single removal keeps it over alpha.

    Single-removal stability implies minimality: if every one-smaller subset
    misses the threshold, so does every smaller subset (score monotonicity).
    """
    current = pset
    shrunk = True
    while shrunk and len(current) > 1:
        shrunk = False
        for idx in current.indices:
            cand = PropertySet(tuple(i for i in current.indices if i != idx))
            if scored(universe.table_columns(cand)).score >= alpha:
                current = cand
                shrunk = True
                break
    return current


def _timings(t0: float, t_ordered: float) -> dict[str, float]:
    now = time.perf_counter()
    return {"ordering": (t_ordered - t0) * 1e3, "search": (now - t_ordered) * 1e3}
