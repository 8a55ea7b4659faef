"""Minimal-key and almost-key discovery for RDF class instances.

Pipeline: parse N-Triples, select one class's instances, build the
signature-indexed instance table, then search the property lattice
best-first for all minimal property sets whose discriminability score
reaches the requested threshold.
"""

from .datagen import GenSpec, generate, generate_to
from .ntriples import (ClassSelection, ParseError, ParseStats, Term, Triple,
                       parse_ntriples, select_class_instances, serialize_ntriples)
from .oracle import OracleResult, audit_monotonicity, brute_force
from .refinement import (PropertySet, PropertyUniverse, compare_sets,
                         order_universe, refine)
from .scoring import (AlmostKeySpec, ScoreResult, alpha_for_k, compute_score,
                      is_almost_key, is_key)
from .search import (SearchConfig, SearchReport, find_keys, minimality_filter,
                     reduction_ratio)
from .signatures import EMPTY_SIGNATURE, ObjectSignature, signature
from .table import ClassTable, StorageBackend, build_table, column_signatures

__version__ = "0.1.0"

__all__ = [
    "AlmostKeySpec", "ClassSelection", "ClassTable", "EMPTY_SIGNATURE",
    "GenSpec", "ObjectSignature", "OracleResult", "ParseError", "ParseStats",
    "PropertySet", "PropertyUniverse", "ScoreResult", "SearchConfig",
    "SearchReport", "StorageBackend", "Term", "Triple", "alpha_for_k",
    "audit_monotonicity", "brute_force", "build_table", "column_signatures",
    "compare_sets", "compute_score", "find_keys", "generate", "generate_to",
    "is_almost_key", "is_key", "minimality_filter", "order_universe",
    "parse_ntriples", "reduction_ratio", "refine", "select_class_instances",
    "serialize_ntriples", "signature",
]
