"""Synthetic dataset generator: determinism, structure, planted keys."""

import io
from fractions import Fraction

import pytest

from minkey.datagen import GenSpec, generate, generate_to, iter_triples
from minkey.ntriples import (ClassSelection, ParseStats, parse_ntriples,
                             select_class_instances)
from minkey.oracle import brute_force
from minkey.scoring import compute_score
from minkey.table import build_table

TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"


def table_from_spec(spec: GenSpec, **kwargs):
    triples = list(iter_triples(spec))
    subjects, _ = select_class_instances(triples, ClassSelection(spec.class_iri))
    body = [t for t in triples if t.predicate != TYPE]
    return build_table(body, subjects, **kwargs)


class TestDeterminism:
    def test_byte_identical_across_runs(self):
        spec = GenSpec(seed=11, subjects=40, properties=5,
                       null_rate=0.2, duplicate_rate=0.5, multi_rate=0.1)
        assert generate(spec) == generate(spec)

    def test_seed_changes_output(self):
        a = GenSpec(seed=1, subjects=40, properties=5, duplicate_rate=0.5)
        b = GenSpec(seed=2, subjects=40, properties=5, duplicate_rate=0.5)
        assert generate(a) != generate(b)

    def test_stream_and_bytes_agree(self, tmp_path):
        spec = GenSpec(seed=3, subjects=25, properties=4, null_rate=0.3)
        path = tmp_path / "data.nt"
        count = generate_to(spec, path)
        assert path.read_bytes() == generate(spec)
        assert count == generate(spec).count(b"\n")

    def test_file_object_target(self):
        spec = GenSpec(seed=4, subjects=10, properties=2)
        buf = io.BytesIO()
        count = generate_to(spec, buf)
        assert buf.getvalue() == generate(spec)
        assert count == 10 * 3  # type triple plus two dense properties each


class TestOutputShape:
    def test_parses_strictly(self):
        spec = GenSpec(seed=5, subjects=30, properties=4,
                       null_rate=0.2, duplicate_rate=0.4, multi_rate=0.2)
        stats = ParseStats()
        triples = list(parse_ntriples(
            generate(spec).decode().splitlines(), stats=stats))
        assert stats.skipped == 0
        assert stats.triples == len(triples) > 0

    def test_type_triple_per_subject(self):
        spec = GenSpec(seed=6, subjects=17, properties=3, null_rate=0.5)
        triples = list(iter_triples(spec))
        typed = [t for t in triples if t.predicate == TYPE]
        assert len(typed) == 17
        assert {t.obj.value for t in typed} == {spec.class_iri}
        assert len({t.subject for t in typed}) == 17

    def test_dense_spec_triple_count(self):
        spec = GenSpec(seed=7, subjects=50, properties=6)
        assert len(list(iter_triples(spec))) == 50 * 7

    def test_null_rate_one_leaves_only_type_triples(self):
        spec = GenSpec(seed=8, subjects=12, properties=3, null_rate=1.0)
        triples = list(iter_triples(spec))
        assert all(t.predicate == TYPE for t in triples)

    def test_zero_padded_iris_sort_in_row_order(self):
        spec = GenSpec(seed=9, subjects=101, properties=12)
        subjects = [spec.subject_iri(i) for i in range(101)]
        assert subjects == sorted(subjects)
        props = [spec.property_iri(j) for j in range(12)]
        assert props == sorted(props)

    def test_single_subject(self):
        spec = GenSpec(seed=10, subjects=1, properties=2)
        triples = list(iter_triples(spec))
        assert len(triples) == 3


class TestPlantedKey:
    def test_planted_columns_form_a_key(self):
        spec = GenSpec(seed=12, subjects=60, properties=6,
                       duplicate_rate=0.9, planted_key=(1, 3))
        table = table_from_spec(spec)
        planted = [spec.property_iri(c) for c in (1, 3)]
        assert compute_score(table, planted).score == 1

    def test_planted_columns_individually_weak(self):
        spec = GenSpec(seed=13, subjects=64, properties=4, planted_key=(0, 1, 2))
        table = table_from_spec(spec)
        for col in (0, 1, 2):
            single = compute_score(table, [spec.property_iri(col)])
            assert single.score < Fraction(1, 2)

    def test_planted_key_is_minimal_under_heavy_duplication(self):
        spec = GenSpec(seed=14, subjects=40, properties=4,
                       duplicate_rate=1.0 - 1e-12, planted_key=(0, 2))
        # near-total duplication keeps non-planted columns from helping,
        # so the oracle should recover exactly the planted pair
        table = table_from_spec(spec, keep_raw=True)
        result = brute_force(table)
        planted = frozenset(spec.property_iri(c) for c in (0, 2))
        assert planted in result.minimal
        for m in result.minimal:
            assert not (m < planted)

    def test_digit_values_repeat_within_column(self):
        spec = GenSpec(seed=15, subjects=30, properties=3, planted_key=(0, 1))
        values = {}
        for t in iter_triples(spec):
            if t.predicate == spec.property_iri(0):
                values.setdefault(t.obj.value, 0)
                values[t.obj.value] += 1
        # base 6 over 30 subjects: every digit value appears several times
        assert all(count > 1 for count in values.values())

    def test_planted_exempt_from_null_and_duplicate_rates(self):
        spec = GenSpec(seed=16, subjects=36, properties=3,
                       null_rate=0.999999, duplicate_rate=0.99,
                       planted_key=(0, 1))
        per_subject = {}
        for t in iter_triples(spec):
            if t.predicate in (spec.property_iri(0), spec.property_iri(1)):
                per_subject.setdefault(t.subject, []).append(t.obj.value)
        assert len(per_subject) == 36
        assert all(len(v) == 2 for v in per_subject.values())
        assert all(v.startswith("k") for vs in per_subject.values() for v in vs)


class TestSpecValidation:
    def test_counts_positive(self):
        with pytest.raises(ValueError, match="at least 1"):
            GenSpec(seed=0, subjects=0, properties=3)
        with pytest.raises(ValueError, match="at least 1"):
            GenSpec(seed=0, subjects=3, properties=0)

    def test_rates_bounded(self):
        with pytest.raises(ValueError, match="null_rate"):
            GenSpec(seed=0, subjects=3, properties=3, null_rate=1.5)
        with pytest.raises(ValueError, match="duplicate_rate"):
            GenSpec(seed=0, subjects=3, properties=3, duplicate_rate=-0.1)

    def test_planted_range(self):
        with pytest.raises(ValueError, match="outside property range"):
            GenSpec(seed=0, subjects=3, properties=3, planted_key=(3,))
        with pytest.raises(ValueError, match="at least one"):
            GenSpec(seed=0, subjects=3, properties=3, planted_key=())

    def test_planted_sorted_and_deduped(self):
        spec = GenSpec(seed=0, subjects=3, properties=4, planted_key=(2, 0, 2))
        assert spec.planted_key == (0, 2)

    def test_planted_contradictions(self):
        with pytest.raises(ValueError, match="duplicate_rate=1"):
            GenSpec(seed=0, subjects=3, properties=3,
                    duplicate_rate=1.0, planted_key=(0,))
        with pytest.raises(ValueError, match="null_rate=1"):
            GenSpec(seed=0, subjects=3, properties=3,
                    null_rate=1.0, planted_key=(0,))
