"""The exhaustive reference scorer, and its agreement with the fast path."""

from fractions import Fraction
from itertools import combinations

import pytest

from minkey.oracle import MAX_UNIVERSE, audit_monotonicity, brute_force
from minkey.scoring import compute_score
from minkey.table import build_table

from conftest import EX, build_from_rows, random_table


class TestWorkedExamples:
    def test_nerve_minimal_keys(self, nerve_table):
        result = brute_force(nerve_table)
        assert set(result.minimal) == {
            frozenset({EX + "grayPage"}),
            frozenset({EX + "graySubject", EX + "meshNumber"}),
        }
        assert result.total == 4
        assert len(result.scores) == 2 ** 4 - 1

    def test_nerve_score_map(self, nerve_table):
        scores = brute_force(nerve_table).scores
        assert scores[frozenset({EX + "grayPage"})] == 1
        assert scores[frozenset({EX + "graySubject"})] == Fraction(1, 2)
        assert scores[frozenset({EX + "meshNumber"})] == Fraction(1, 2)
        assert scores[frozenset({EX + "graySubject", EX + "meshNumber"})] == 1

    def test_film_key(self, film_table):
        result = brute_force(film_table)
        assert set(result.minimal) == {frozenset({EX + "hasActor"})}

    def test_almost_key_threshold(self, nerve_table):
        result = brute_force(nerve_table, alpha=Fraction(1, 2))
        assert set(result.minimal) == {
            frozenset({EX + "grayPage"}),
            frozenset({EX + "graySubject"}),
            frozenset({EX + "meshNumber"}),
        }

    def test_no_keys_when_rows_identical(self, dup_table):
        result = brute_force(dup_table)
        assert result.minimal == []
        assert all(score == 0 for score in result.scores.values())


class TestDegenerate:
    def test_single_subject_every_singleton_is_key(self):
        table = build_from_rows({"solo": {"p": ["1"], "q": ["2"]}}, EX + "C")
        result = brute_force(table)
        assert set(result.minimal) == {frozenset({p}) for p in table.properties}

    def test_empty_table(self):
        table = build_table([], set(), keep_raw=True)
        result = brute_force(table)
        assert result.scores == {}
        assert result.minimal == []
        assert result.total == 0

    def test_universe_guard(self):
        rows = {"s": {f"p{j:02d}": ["v"] for j in range(MAX_UNIVERSE)}}
        table = build_from_rows(rows, EX + "C")  # type column pushes past 20
        with pytest.raises(ValueError, match="brute-force guard"):
            brute_force(table)

    def test_requires_raw_cells(self, nerve_table):
        bare = build_from_rows({"s": {"p": ["v"]}}, EX + "C", keep_raw=False)
        with pytest.raises(ValueError, match="keep_raw"):
            brute_force(bare)


class TestMinimality:
    def test_minimal_sets_contain_no_smaller_key(self):
        for seed in range(10):
            table = random_table(seed)
            result = brute_force(table, alpha=Fraction(9, 10))
            for m in result.minimal:
                assert result.scores[m] >= result.alpha
                for size in range(1, len(m)):
                    for sub in combinations(m, size):
                        assert result.scores[frozenset(sub)] < result.alpha

    def test_every_passing_set_contains_a_minimal_one(self):
        for seed in range(6):
            table = random_table(seed, props=4)
            result = brute_force(table)
            for subset, score in result.scores.items():
                if score >= 1:
                    assert any(m <= subset for m in result.minimal)


class TestAgreementWithEngineScoring:
    def test_scores_match_compute_score(self):
        for seed in range(10):
            table = random_table(seed)
            result = brute_force(table)
            for subset, score in result.scores.items():
                assert compute_score(table, list(subset)).score == score

    def test_agreement_in_hashed_mode(self):
        # the oracle never hashes, so this exercises digest integrity
        for seed in range(6):
            from conftest import random_rows
            import random as _random
            rng = _random.Random(seed)
            rows = random_rows(rng, subjects=25, props=4)
            exact = build_from_rows(rows, EX + "C")
            hashed = build_from_rows(rows, EX + "C", score_mode="hashed")
            for subset, score in brute_force(exact).scores.items():
                assert compute_score(hashed, list(subset)).score == score


class TestMonotonicityAudit:
    def test_clean_on_real_tables(self, nerve_table, film_table):
        assert audit_monotonicity(brute_force(nerve_table)) == []
        assert audit_monotonicity(brute_force(film_table)) == []

    def test_clean_on_random_tables(self):
        for seed in range(10):
            assert audit_monotonicity(brute_force(random_table(seed))) == []

    def test_reports_fabricated_violation(self, nerve_table):
        result = brute_force(nerve_table)
        broken = dict(result.scores)
        key = frozenset({EX + "grayPage"})
        superset = frozenset({EX + "grayPage", EX + "graySubject"})
        assert broken[key] == 1
        broken[superset] = Fraction(1, 2)
        from minkey.oracle import OracleResult
        tampered = OracleResult(scores=broken, minimal=result.minimal,
                                alpha=result.alpha, total=result.total)
        violations = audit_monotonicity(tampered)
        assert violations
        assert "grayPage" in violations[0]
