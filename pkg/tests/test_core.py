from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tsirelson_lab.core import (
    ParseError,
    SignPattern,
    SparseVector,
    TsirelsonError,
    ZeroCoefficientError,
    as_rational,
    basis_sum,
    ell1_norm,
    flip_signs,
    format_rational,
    format_vector,
    parse_index_set,
    parse_rational,
    parse_vector,
    project,
    spread,
    sup_norm,
)
from strategies import index_sets, sign_patterns, vectors

Q = Fraction
e = SparseVector.basis


def v(text):
    return parse_vector(text)


class TestExamples:
    def test_project(self):
        assert project(basis_sum([1, 2, 3]), {2, 3}) == basis_sum([2, 3])
        assert project(v("1:1,4:2"), ()) == SparseVector.zero()
        assert project(v("4:1/2,7:-2/3"), {7, 9}) == v("7:-2/3")

    def test_sup_norm(self):
        assert sup_norm(basis_sum([2, 3])) == 1
        assert sup_norm(SparseVector.zero()) == 0
        assert sup_norm(v("1:1/2,5:-2/3")) == Q(2, 3)

    def test_ell1_norm(self):
        assert ell1_norm(basis_sum([2, 3])) == 2
        assert ell1_norm(SparseVector.zero()) == 0
        assert ell1_norm(v("1:1/2,5:-2/3")) == Q(7, 6)

    def test_flip_signs(self):
        assert flip_signs(basis_sum([1, 2]), SignPattern.constant(-1)) == v("1:-1,2:-1")
        x = v("1:1/2,3:-4")
        assert flip_signs(x, SignPattern.constant(1)) == x
        assert flip_signs(v("3:1,5:-1"), SignPattern(((3, -1),), 1)) == v("3:-1,5:-1")

    def test_spread(self):
        assert spread(basis_sum([1, 2]), {1: 3, 2: 4}) == basis_sum([3, 4])
        x = v("2:1,5:-1/3")
        assert spread(x, {2: 2, 5: 5}) == x
        assert spread(v("2:1/2"), {2: 9}) == v("9:1/2")

    @pytest.mark.parametrize("table", [{1: 3, 2: 3}, {1: 4, 2: 3}, {2: 1}, {1: 2}])
    def test_spread_rejects_bad_maps(self, table):
        with pytest.raises(TsirelsonError):
            spread(basis_sum([1, 2]), table)

    def test_parse(self):
        assert v("2:1,3:1") == basis_sum([2, 3])
        assert v("1:1/2,5:-2/3") == SparseVector.from_dict({1: Q(1, 2), 5: Q(-2, 3)})
        with pytest.raises(ZeroCoefficientError):
            v("3:0")

    @pytest.mark.parametrize("text", ["0:1", "-1:1", "2:1,2:1", "3:1,2:1", "2:1/0", "2:x", "2", "a:1", "2:1.5"])
    def test_parse_rejects(self, text):
        with pytest.raises(ParseError):
            v(text)

    def test_zero_vector_text(self):
        assert v("") == v("0") == SparseVector.zero()
        assert format_vector(SparseVector.zero()) == "0"

    def test_rationals(self):
        assert parse_rational("-6/4") == Q(-3, 2)
        assert format_rational(Q(6, 4)) == "3/2"
        assert format_rational(Q(4, 2)) == "2"
        with pytest.raises(TypeError):
            as_rational(0.5)
        with pytest.raises(TypeError):
            as_rational(True)

    def test_index_sets(self):
        assert parse_index_set("2,4,5") == (2, 4, 5)
        assert parse_index_set("") == ()
        for bad in ("3,2", "0,1", "1,1", "x"):
            with pytest.raises(ParseError):
                parse_index_set(bad)

    def test_vector_rejects_zero_entries(self):
        with pytest.raises(ZeroCoefficientError):
            SparseVector(((1, Q(0)),))
        assert SparseVector.from_dict({1: 0, 2: 3}) == e(2, 3)

    def test_arithmetic(self):
        x, y = v("1:1,2:1/2"), v("2:-1/2,3:2")
        assert x + y == v("1:1,3:2")
        assert x - x == SparseVector.zero()
        assert 2 * x == v("1:2,2:1")
        assert x / 2 == v("1:1/2,2:1/4")
        assert x[2] == Q(1, 2) and x[7] == 0

    def test_sign_pattern_is_canonical(self):
        assert SignPattern(((1, 1), (2, -1)), 1) == SignPattern(((2, -1),), 1)
        with pytest.raises(TsirelsonError):
            SignPattern((), 0)


class TestProperties:
    @given(vectors(12, 6))
    def test_round_trip(self, x):
        assert parse_vector(format_vector(x)) == x

    @given(vectors(), index_sets(), index_sets())
    def test_projection_composes(self, x, E, F):
        assert project(project(x, E), F) == project(x, set(E) & set(F))

    @given(vectors(), sign_patterns())
    def test_flips_preserve_norms(self, x, s):
        y = flip_signs(x, s)
        assert sup_norm(y) == sup_norm(x)
        assert ell1_norm(y) == ell1_norm(x)
        assert flip_signs(y, s) == x

    @given(vectors(), vectors(), st.integers(-5, 5), st.integers(1, 5))
    def test_lowest_terms(self, x, y, p, q):
        for z in (x + y, x - y, x * Fraction(p, q), -x):
            for _, a in z.entries:
                assert a != 0
                assert Fraction(a.numerator, a.denominator) == a
                assert a.denominator > 0
            assert list(z.support) == sorted(set(z.support))
