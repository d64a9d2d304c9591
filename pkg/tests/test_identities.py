from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import primerange

from oracles import three_squares
from quatlat.errors import ParameterError
from quatlat.identities import (
    SpaceTag,
    check_space,
    definite_series,
    heegner_degree,
    heegner_degrees,
    indefinite_series,
    matching_weights,
    r_definite,
    r_indefinite,
    verify_cor12,
    verify_thm11,
    verify_thm13,
    volume,
)


class TestSpaceTag:
    def test_parity(self):
        assert SpaceTag(2).definite
        assert not SpaceTag(6).definite
        assert SpaceTag(30, 7).definite

    @pytest.mark.parametrize("D,N", [(1, 1), (4, 1), (6, 2), (6, 0), (0, 1)])
    def test_rejected(self, D, N):
        with pytest.raises(ParameterError):
            check_space(D, N)


class TestWeights:
    def test_values(self):
        assert matching_weights(3) == (-1, 2)
        assert matching_weights(2) == (-2, 3)

    @given(st.sampled_from(list(primerange(2, 200))))
    def test_sum_to_one(self, p):
        assert sum(matching_weights(p)) == 1

    def test_composite_rejected(self):
        with pytest.raises(ParameterError):
            matching_weights(4)


class TestVolume:
    def test_frozen_values(self):
        assert volume(6, 1) == Fraction(1, 3)
        assert volume(10, 1) == Fraction(2, 3)
        assert volume(6, 5) == 2

    @given(st.sampled_from([2, 3, 5, 6, 7, 10, 14, 15, 21, 30, 42]), st.integers(1, 60))
    def test_sixth_integral(self, D, N):
        from math import gcd

        if gcd(D, N) != 1:
            return
        v = volume(D, N)
        assert v > 0
        assert (6 * v).denominator == 1

    def test_level_multiplies_by_index(self):
        # [Gamma_0(1) : Gamma_0(p)] = p + 1
        for p in (5, 7, 11):
            assert volume(6, p) == (p + 1) * volume(6, 1)


class TestDefinite:
    def test_three_squares(self, cache):
        assert definite_series(2, 1, 100, cache) == [three_squares(m) for m in range(101)]

    def test_constant_term(self, cache):
        assert r_definite(2, 1, 0, cache) == 1
        assert r_definite(3, 1, 0, cache) == 1

    def test_discriminant_three(self, cache):
        # single class [[2,0,1],[0,6,0],[1,0,2]]: six vectors of norm 1
        assert r_definite(3, 1, 1, cache) == 6

    def test_indefinite_rejected(self, cache):
        with pytest.raises(ParameterError):
            r_definite(6, 1, 1, cache)


class TestIndefinite:
    def test_shape_via_three(self, cache):
        a = definite_series(2, 1, 15, cache)
        b = definite_series(2, 3, 15, cache)
        assert indefinite_series(6, 1, 15, 3, cache) == [-x + 2 * y for x, y in zip(a, b)]

    @pytest.mark.parametrize("N", [1, 5])
    def test_split_prime_independent(self, N, cache):
        assert indefinite_series(6, N, 30, 2, cache) == indefinite_series(6, N, 30, 3, cache)

    def test_split_prime_independent_ten(self, cache):
        assert indefinite_series(10, 1, 20, 2, cache) == indefinite_series(10, 1, 20, 5, cache)

    def test_constant_term(self, cache):
        assert r_indefinite(6, 1, 0, None, cache) == 1
        assert r_indefinite(10, 3, 0, None, cache) == 1

    def test_bad_split_prime(self, cache):
        with pytest.raises(ParameterError):
            r_indefinite(6, 1, 1, 5, cache)

    def test_definite_rejected(self, cache):
        with pytest.raises(ParameterError):
            r_indefinite(30, 1, 1, None, cache)


class TestHeegner:
    def test_deg_is_r_times_vol(self, cache):
        for rec in heegner_degrees(6, 1, 10, None, cache):
            assert rec.vol == Fraction(1, 3)
            assert rec.deg == rec.r * rec.vol
            assert rec.split_prime == 2

    def test_split_prime_recorded_and_irrelevant(self, cache):
        a = heegner_degree(6, 5, 7, 2, cache)
        b = heegner_degree(6, 5, 7, 3, cache)
        assert (a.split_prime, b.split_prime) == (2, 3)
        assert a.deg == b.deg

    def test_magnitudes(self, cache):
        # elliptic points of orders 2 and 3 on the level-one curve of discriminant 6
        assert abs(heegner_degree(6, 1, 1, None, cache).deg) == 2
        assert abs(heegner_degree(6, 1, 3, None, cache).deg) == Fraction(4, 3)

    @pytest.mark.xfail(
        strict=True,
        reason="the identity-defined normalized degrees are <= 0 for m > 0; "
        "their magnitudes are the stabilizer-weighted counts",
    )
    def test_nonnegative_sweep(self, cache):
        for D, N in [(6, 1), (6, 5), (10, 1), (15, 1)]:
            for rec in heegner_degrees(D, N, 20, None, cache):
                assert rec.nonnegative, rec

    def test_sign_pattern(self, cache):
        for D, N in [(6, 1), (6, 5), (10, 1), (15, 1)]:
            recs = heegner_degrees(D, N, 20, None, cache)
            assert recs[0].r == 1
            assert all(r.r <= 0 for r in recs[1:])


class TestReports:
    @pytest.mark.parametrize("D,p,q,N", [(1, 2, 3, 1), (1, 2, 5, 1), (1, 3, 5, 1), (1, 2, 3, 5), (2, 3, 5, 1)])
    def test_two_prime_matching(self, D, p, q, N, cache):
        rep = verify_thm11(D, p, q, N, 20, cache)
        assert rep.verdict, rep.failures()
        assert rep.rows[0].lhs == rep.rows[0].rhs == 1
        assert len(rep.rows) == 21

    def test_two_prime_parameter_checks(self, cache):
        for args in [(1, 2, 2, 1), (1, 2, 4, 1), (2, 2, 3, 1), (1, 2, 3, 2)]:
            with pytest.raises(ParameterError):
                verify_thm11(*args, 5, cache)

    def test_reduction_cross_parity(self, cache):
        rep = verify_thm13(6, 5, 1, 20, cache)
        assert rep.mode == "cross-parity"
        assert rep.verdict, rep.failures()
        assert rep.rows[0].lhs == rep.rows[0].rhs == 1

    def test_reduction_degenerate_mode(self, cache):
        rep = verify_thm13(2, 3, 1, 20, cache)
        assert rep.mode == "split-prime-independence"
        assert rep.parameters["other_split_prime"] == 2
        assert rep.verdict

    def test_reduction_rejects_one(self, cache):
        with pytest.raises(ParameterError, match="Siegel-Weil"):
            verify_thm13(1, 2, 1, 5, cache)

    def test_degree_identity(self, cache):
        rep = verify_cor12(2, 3, 5, 1, 20, cache)
        assert rep.verdict, rep.failures()
        # m = 0: -2 vol(6, 1) + vol(6, 5) against -2 vol(10, 1) + vol(10, 3)
        assert rep.rows[0].lhs == -2 * volume(6, 1) + volume(6, 5) == Fraction(4, 3)
        assert rep.rows[0].rhs == -2 * volume(10, 1) + volume(10, 3) == Fraction(4, 3)

    def test_degree_identity_scales_to_two_prime(self, cache):
        D, p, q, N = 2, 3, 5, 1
        cor = verify_cor12(D, p, q, N, 15, cache)
        thm = verify_thm11(D, p, q, N, 15, cache)
        scale = volume(D, N) * (p - 1) * (q - 1)
        for a, b in zip(cor.rows, thm.rows):
            assert a.lhs == scale * b.lhs
            assert a.rhs == scale * b.rhs

    def test_degree_identity_parity_gate(self, cache):
        with pytest.raises(ParameterError):
            verify_cor12(6, 5, 7, 1, 5, cache)

    def test_report_detects_violation(self):
        from quatlat.identities import IdentityReport, IdentityRow

        rep = IdentityReport("thm11", {}, [IdentityRow(0, Fraction(1), Fraction(1)), IdentityRow(1, Fraction(2), Fraction(3))])
        assert not rep.verdict
        assert [r.m for r in rep.failures()] == [1]


def test_concurrent_cache_first_write_wins():
    from concurrent.futures import ThreadPoolExecutor

    from quatlat.identities import GenusCache

    c = GenusCache()
    with ThreadPoolExecutor(4) as ex:
        results = list(ex.map(lambda _: c.get(5, 2), range(8)))
    assert all(r is results[0] for r in results)
