import json
from fractions import Fraction

import pytest

from tsirelson_lab.core import SparseVector, TsirelsonError, basis_sum, parse_vector
from tsirelson_lab.harness import (
    CorpusSpec,
    compare_oracle,
    conforming_maps,
    default_contexts,
    generate_corpus,
    nonconforming_maps,
    run_isometry_suite,
    run_lemma_suite,
)
from tsirelson_lab.isometry import check_isometry, has_isometry_form
from tsirelson_lab.norm import NormContext, tsirelson_norm
from tsirelson_lab.schreier import OMEGA, Ordinal

Q = Fraction
HALF_1 = NormContext(Q(1, 2), Ordinal.finite(1))
HALF_2 = NormContext(Q(1, 2), Ordinal.finite(2))
TWO_FIFTHS = NormContext(Q(2, 5), Ordinal.finite(1))


class TestCorpus:
    def test_deterministic(self):
        spec = CorpusSpec(seed=42)
        assert generate_corpus(spec, HALF_1) == generate_corpus(spec, HALF_1)
        assert generate_corpus(CorpusSpec(seed=7), HALF_1) != generate_corpus(spec, HALF_1)

    @pytest.mark.parametrize("ctx", default_contexts(), ids=str)
    def test_on_sphere(self, ctx):
        for x in generate_corpus(CorpusSpec(count=10), ctx):
            assert tsirelson_norm(x, ctx) == 1

    def test_structured_seeds(self):
        corpus = generate_corpus(CorpusSpec(count=0, max_index=6), HALF_1)
        assert basis_sum(range(4, 8), Q(1, 2)) in corpus
        assert basis_sum([3, 4, 5], Q(2, 3)) in corpus
        assert all(SparseVector.basis(i) in corpus for i in range(1, 7))
        corpus = generate_corpus(CorpusSpec(count=0), TWO_FIFTHS)
        assert parse_vector("1:1,4:-1,5:-1") in corpus
        assert parse_vector("3:5/6,4:-5/6,5:-5/6") in corpus

    @pytest.mark.parametrize("kwargs", [dict(max_index=0), dict(max_support=0), dict(count=-1),
                                        dict(denominators=(0,)), dict(seed=-1), dict(max_index=99)])
    def test_bounds(self, kwargs):
        with pytest.raises(TsirelsonError):
            CorpusSpec(**kwargs)


class TestMapEnumeration:
    @pytest.mark.parametrize("ctx", default_contexts(), ids=str)
    def test_partition(self, ctx):
        assert all(has_isometry_form(m, ctx) for m in conforming_maps(ctx))
        assert not any(has_isometry_form(m, ctx) for m in nonconforming_maps(ctx))

    def test_counts(self):
        # 2 permutations x 4 prefix signs x 2 tail signs
        assert len(conforming_maps(HALF_1)) == 16
        assert len(conforming_maps(HALF_2)) == 4


class TestSuites:
    def test_lemma_suite(self):
        corpus = generate_corpus(CorpusSpec(count=6), HALF_1)
        r = run_lemma_suite(HALF_1, corpus)
        assert r.status == "pass", r.checks
        assert {c.name for c in r.checks} == {"peak-coordinate", "coordinate-probe-norms", "separating-probes",
                                              "flat-block-closed-forms"}

    def test_lemma_suite_order_two(self):
        r = run_lemma_suite(HALF_2, generate_corpus(CorpusSpec(count=6), HALF_2))
        assert r.passed and r.check("block-selection").passed

    def test_isometry_suite_two_fifths(self):
        r = run_isometry_suite(TWO_FIFTHS, generate_corpus(CorpusSpec(count=6), TWO_FIFTHS))
        assert r.passed
        assert r.check("ceiling-map-rejected").passed
        assert any(c["lhs"] == "6/5" for c in r.counterexamples)

    def test_isometry_suite_order_two(self):
        r = run_isometry_suite(HALF_2, generate_corpus(CorpusSpec(count=6), HALF_2))
        assert r.passed
        assert {"x": "2:1,3:1,4:1,5:1", "lhs": "3/2", "rhs": "2"}.items() <= next(
            c for c in r.counterexamples if c["label"].startswith("perm=2,1")).items()

    def test_report_json(self):
        r = run_isometry_suite(HALF_1, generate_corpus(CorpusSpec(count=4), HALF_1))
        doc = json.loads(r.to_json())
        assert doc["schema"] == "tsirelson-lab/1"
        assert set(doc) == {"schema", "suite", "theta", "alpha", "status", "checks", "counterexamples",
                            "pairs_checked", "elapsed"}
        assert doc["theta"] == "1/2" and doc["alpha"] == "1"
        names = [c["name"] for c in doc["checks"]]
        assert names == sorted(names)

    def test_reports_are_reproducible(self):
        corpus = generate_corpus(CorpusSpec(count=4), HALF_2)
        a = run_isometry_suite(HALF_2, corpus).to_json(include_elapsed=False)
        b = run_isometry_suite(HALF_2, generate_corpus(CorpusSpec(count=4), HALF_2)).to_json(include_elapsed=False)
        assert a == b

    def test_counterexamples_reproduce(self):
        from tsirelson_lab.isometry import parse_map
        r = run_isometry_suite(TWO_FIFTHS, generate_corpus(CorpusSpec(count=4), TWO_FIFTHS))
        for c in r.counterexamples:
            m = parse_map(c["label"])
            x, y = parse_vector(c["x"]), parse_vector(c["y"])
            again = check_isometry(m, [x] if y.is_zero() else [x, y], TWO_FIFTHS)
            assert not again.passed

    def test_oracle_small(self):
        for ctx in (HALF_1, HALF_2, TWO_FIFTHS, NormContext(Q(1, 2), OMEGA)):
            r = compare_oracle(ctx, 4)
            assert r.passed and r.pairs_checked == 5 ** 4

    def test_oracle_bound(self):
        with pytest.raises(TsirelsonError):
            compare_oracle(HALF_1, 8)
