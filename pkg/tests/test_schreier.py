from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from oracles import maximal_by_appending, schreier_member
from strategies import index_sets
from tsirelson_lab.core import TsirelsonError
from tsirelson_lab.schreier import (
    OMEGA,
    ConstructionTooLarge,
    Ordinal,
    check_regularity,
    decompose,
    enumerate_members,
    greedy_maximal,
    is_maximal,
    is_member,
    is_member_bruteforce,
    maximal_interval_end,
    parse_ordinal,
    run_interval,
    start_state,
    push_state,
)

F = Ordinal.finite
ORDERS = [F(0), F(1), F(2), F(3), OMEGA, Ordinal.omega_plus(1)]


def subsets(N):
    for r in range(N + 1):
        yield from combinations(range(1, N + 1), r)


class TestOrdinals:
    @pytest.mark.parametrize("text,expected", [("0", F(0)), ("3", F(3)), ("w", OMEGA), ("ω", OMEGA),
                                               ("w+2", Ordinal.omega_plus(2))])
    def test_parse(self, text, expected):
        assert parse_ordinal(text) == expected
        assert parse_ordinal(str(expected)) == expected

    @pytest.mark.parametrize("text", ["", "-1", "w+", "x", "2w", "w+-1"])
    def test_parse_rejects(self, text):
        with pytest.raises(TsirelsonError):
            parse_ordinal(text)

    def test_order(self):
        assert F(0) < F(5) < OMEGA < Ordinal.omega_plus(1)
        assert Ordinal.omega_plus(1).predecessor() == OMEGA
        assert OMEGA.is_limit and not F(2).is_limit


class TestMembership:
    def test_examples(self):
        for alpha in ORDERS:
            assert is_member((7,), alpha)
            assert is_member((), alpha)
        assert not is_member((1, 2), F(1))
        assert is_member((2, 4, 5, 6, 7), F(2))
        assert not is_member((1, 2), OMEGA)
        assert is_member((2, 3), OMEGA)

    def test_agrees_with_definitions(self):
        # two independent definitional implementations on every subset of 1..10
        for alpha in ORDERS:
            for S in subsets(10):
                got = is_member(S, alpha)
                assert got == schreier_member(S, str(alpha)), (S, alpha)
                assert got == is_member_bruteforce(S, alpha), (S, alpha)

    def test_nesting(self):
        chain = [F(0), F(1), F(2), F(3)]
        for S in subsets(12):
            for lo, hi in zip(chain, chain[1:]):
                if is_member(S, lo):
                    assert is_member(S, hi)
            if is_member(S, OMEGA):
                assert is_member(S, Ordinal.omega_plus(1))


class TestDecompose:
    def test_examples(self):
        d = decompose((2, 4, 5, 6, 7), F(2))
        assert d.blocks == ((2,), (4, 5, 6, 7)) and d.order == F(1)
        d = decompose((3, 4, 5), F(1))
        assert d.blocks == ((3,), (4,), (5,)) and d.order == F(0)
        assert decompose((1, 3), F(2)) is None

    def test_rejects_zero_order(self):
        with pytest.raises(TsirelsonError):
            decompose((1,), F(0))

    def test_matches_membership(self):
        for alpha in ORDERS[1:]:
            for S in subsets(10):
                if not S:
                    continue
                d = decompose(S, alpha)
                assert (d is not None) == is_member(S, alpha)
                if d is not None:
                    assert tuple(i for b in d.blocks for i in b) == S
                    assert len(d.blocks) <= S[0]
                    assert all(is_member(b, d.order) for b in d.blocks)


class TestEnumeration:
    def test_examples(self):
        assert enumerate_members(F(0), 3) == [(), (1,), (2,), (3,)]
        assert enumerate_members(F(1), 3) == [(), (1,), (2,), (3,), (2, 3)]
        assert enumerate_members(OMEGA, 3) == [(), (1,), (2,), (3,), (2, 3)]

    def test_bound(self):
        with pytest.raises(TsirelsonError):
            enumerate_members(F(1), 17)


class TestMaximal:
    def test_examples(self):
        assert greedy_maximal(3, F(1)) == (3, 4, 5)
        assert greedy_maximal(1, F(1)) == (1,)
        # two S_1 blocks {2,3} and {4..7}; independently confirmed below
        assert greedy_maximal(2, F(2)) == (2, 3, 4, 5, 6, 7)
        assert is_maximal((3, 4, 5), F(1))
        assert is_maximal((2, 3), F(1))
        assert not is_maximal((2,), F(1))
        assert is_maximal((1,), F(1))
        with pytest.raises(TsirelsonError):
            is_maximal((1, 2), F(1))

    def test_matches_append_oracle(self):
        cases = [(F(1), m) for m in range(1, 9)] + [(F(2), m) for m in range(1, 4)]
        cases += [(OMEGA, 1), (OMEGA, 2)]
        for alpha, m in cases:
            assert greedy_maximal(m, alpha) == maximal_by_appending(m, str(alpha))

    def test_greedy_is_maximal(self):
        for alpha in (F(1), F(2)):
            for m in range(1, 9):
                G = greedy_maximal(m, alpha)
                assert is_member(G, alpha) and is_maximal(G, alpha)

    def test_interval_arithmetic(self):
        assert maximal_interval_end(5, F(0)) == 6
        assert maximal_interval_end(5, F(1)) == 10
        assert maximal_interval_end(5, F(2)) == 5 * 2 ** 5
        assert maximal_interval_end(20, F(3), limit=10 ** 6) is None
        with pytest.raises(ConstructionTooLarge):
            greedy_maximal(9, F(3))

    @given(st.sampled_from([F(0), F(1), F(2), OMEGA]), st.integers(1, 5),
           st.lists(st.integers(1, 3), max_size=4), st.integers(1, 3))
    def test_run_interval_matches_pushing(self, alpha, first, gaps, skip):
        S = [first]
        for g in gaps:
            S.append(S[-1] + g)
        state = start_state(alpha, S[0])
        for x in S[1:]:
            state = push_state(alpha, state, x)
            if state is None:
                return
        start = S[-1] + skip
        end = run_interval(alpha, state, start, 3000)
        e, st_ = start, state
        while e < start + 3001:
            nxt = push_state(alpha, st_, e)
            if nxt is None:
                break
            st_, e = nxt, e + 1
        assert end == (e if e - start <= 3000 else None)


class TestRegularity:
    @pytest.mark.parametrize("alpha", [F(1), F(2), OMEGA])
    def test_examples(self, alpha):
        assert check_regularity(alpha, 10).passed

    @given(st.sampled_from(ORDERS), index_sets(12), st.data())
    def test_hereditary_and_spreading(self, alpha, S, data):
        if not is_member(S, alpha):
            return
        sub = tuple(x for x in S if data.draw(st.booleans()))
        assert is_member(sub, alpha)
        shifted, prev = [], 0
        for x in S:
            y = max(x, prev + 1) + data.draw(st.integers(0, 2))
            shifted.append(y)
            prev = y
        assert is_member(tuple(shifted), alpha)
