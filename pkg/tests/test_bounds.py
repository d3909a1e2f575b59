"""Tests for the upper bounds, tail checks and ratio bounds."""

from fractions import Fraction
from itertools import product
from math import comb, factorial

import mpmath
import pytest

from seqopt.bounds import (
    exp_bound_holds,
    h_dot,
    h_vector,
    mirrored_tail,
    ocmax,
    ocmax_row,
    ratio_report,
    tail_probability,
    tail_threshold,
    upper_ratio,
)
from seqopt.numbers import Mask, complement, f_weight, triangle, value


def all_masks(max_k):
    for k in range(1, max_k + 1):
        for bits in product((0, 1), repeat=k + 1):
            yield Mask(bits)


class TestHVector:
    def test_n_two_is_binomials(self):
        for k in (1, 2, 3):
            assert h_vector(2, k).entries == tuple(Fraction(comb(k, p)) for p in range(k + 1))

    def test_harmonic_entry(self):
        assert h_vector(4, 1).entries[1] == Fraction(11, 6)  # 1 + 1/2 + 1/3

    def test_leading_entry_counts_terms(self):
        for n in (1, 2, 5, 9):
            assert h_vector(n, 2).entries[0] == n - 1

    def test_positive_past_row_one(self):
        assert all(e > 0 for e in h_vector(5, 3).entries)

    def test_validation(self):
        with pytest.raises(ValueError):
            h_vector(0, 1)
        with pytest.raises(ValueError):
            h_vector(3, 0)


class TestHDot:
    def test_examples(self):
        assert h_dot(2, Mask.stirling()) == 1
        assert h_dot(4, Mask.stirling()) == Fraction(11, 6)
        assert h_dot(6, Mask.from_string("00")) == 0

    def test_equals_weight_partial_sums(self):
        for mask in all_masks(3):
            for n in range(1, 9):
                direct = sum((f_weight(j, mask) for j in range(2, n + 1)), Fraction(0))
                assert h_dot(n, mask) == direct


class TestOcmax:
    def test_examples(self):
        m01 = Mask.stirling()
        assert ocmax(m01, 3, 2) == 3
        assert value(m01, 3, 2) == 3  # the bound is tight here
        assert ocmax(m01, 3, 3) == Fraction(9, 4)
        assert ocmax(m01, 3, 0) == 0
        assert ocmax(Mask.from_string("10"), 3, 3) == 0

    def test_tight_at_bottom_of_support(self):
        for mask in all_masks(2):
            for n in range(1, 8):
                assert ocmax(mask, n, mask.offset) == value(mask, n, mask.offset)

    def test_dominates_triangle(self):
        for mask in all_masks(2):
            tri = triangle(mask, 10)
            for n in range(1, 11):
                row = ocmax_row(mask, n)
                for m in mask.support(n):
                    assert row[m] >= tri.value(n, m)

    def test_row_matches_single_entry_formula(self):
        for mask in all_masks(2):
            for n in (1, 2, 5, 9):
                assert ocmax_row(mask, n) == {m: ocmax(mask, n, m) for m in mask.support(n)}

    def test_cross_dominance_through_complement(self):
        for mask in all_masks(2):
            comp = complement(mask)
            for n in range(1, 9):
                for m in mask.support(n):
                    assert value(mask, n, m) <= ocmax(comp, n, n - m)


class TestTailThreshold:
    def test_all_zero_mask_reduces_to_margin(self):
        for m1 in (1, 2, 3):
            assert tail_threshold(Mask.from_string("00"), 7, m1) == m1
            assert tail_threshold(Mask.from_string("000"), 7, m1) == m1

    def test_single_column_threshold(self):
        # ceil(e * (ln 9 + 1)) = ceil(8.6909...) = 9
        assert tail_threshold(Mask.stirling(), 10, 1) == 10

    def test_two_column_threshold_at_n_two(self):
        # ln 1 = 0 kills the log but not the +1: ceil(2e + e*pi^2/6) = 10
        assert tail_threshold(Mask.from_string("011"), 2, 2) == 12

    def test_rejects_wrong_branch_and_bad_args(self):
        with pytest.raises(ValueError, match="mirrored_tail"):
            tail_threshold(Mask.from_string("10"), 5, 1)
        with pytest.raises(ValueError):
            tail_threshold(Mask.stirling(), 1, 1)
        with pytest.raises(ValueError):
            tail_threshold(Mask.stirling(), 5, 0)


class TestTailProbability:
    def test_empty_tail(self):
        assert tail_probability(Mask.stirling(), 4, 4) == 0
        assert tail_probability(Mask.stirling(), 4, 7) == 0

    def test_stirling_row_four(self):
        # mass of m in {3, 4}: (6 + 1) / 24
        assert tail_probability(Mask.stirling(), 4, 2) == Fraction(7, 24)

    def test_below_support_captures_everything(self):
        assert tail_probability(Mask.stirling(), 4, 0) == 1
        assert tail_probability(Mask.from_string("10"), 4, -1) == 1

    def test_within_exponential_bound(self):
        for mask in all_masks(2):
            if mask.bits[0] != 0:
                continue
            for n in (5, 9):
                for m1 in (1, 2):
                    thr = tail_threshold(mask, n, m1)
                    prob = tail_probability(mask, n, thr + mask.offset - 1)
                    assert 0 <= prob <= 1
                    assert exp_bound_holds(prob, -m1)


class TestMirroredTail:
    def test_threshold_comes_from_complement(self):
        mask = Mask.from_string("10")
        for n in (5, 10):
            for m1 in (1, 2):
                thr, _ = mirrored_tail(mask, n, m1)
                assert thr == tail_threshold(complement(mask), n, m1)

    def test_equals_complement_upper_tail(self):
        for mask in all_masks(2):
            if mask.bits[0] != 1:
                continue
            comp = complement(mask)
            for n in (5, 8):
                for m1 in (1, 2):
                    thr, prob = mirrored_tail(mask, n, m1)
                    assert prob == tail_probability(comp, n, thr + comp.offset - 1)
                    assert 0 <= prob <= 1
                    assert exp_bound_holds(prob, -m1)

    def test_rejects_wrong_branch(self):
        with pytest.raises(ValueError, match="tail_threshold"):
            mirrored_tail(Mask.stirling(), 5, 1)


class TestRatioReport:
    def test_row_two_ratio_is_one(self):
        rep = ratio_report(Mask.stirling(), 2)
        assert rep.ratio == 1
        assert rep.ratio_ok and rep.ratio_prime_ok

    def test_ratio_at_least_one(self):
        for mask in all_masks(2):
            rep = ratio_report(mask, 7)
            assert rep.ratio >= 1
            assert rep.ratio_prime >= 1

    def test_upper_bounds_map_matches_ocmax(self):
        mask = Mask.from_string("011")
        rep = ratio_report(mask, 5)
        assert rep.upper_bounds == {m: ocmax(mask, 5, m) for m in mask.support(5)}

    def test_lambdas_are_h_dots(self):
        mask = Mask.from_string("110")
        rep = ratio_report(mask, 6)
        assert rep.lam == h_dot(6, mask)
        assert rep.lam_prime == h_dot(6, complement(mask))

    def test_tail_checks_populated(self):
        rep = ratio_report(Mask.stirling(), 6, (1, 2))
        assert [t.m1 for t in rep.tails] == [1, 2]
        assert all(t.ok for t in rep.tails)
        assert all(0 <= t.probability <= 1 for t in rep.tails)

    def test_upper_ratio_equals_row_total(self):
        for mask in all_masks(2):
            for n in (2, 4, 7, 10):
                want = sum(ocmax_row(mask, n).values()) / Fraction(factorial(n) ** mask.k)
                assert upper_ratio(mask, n) == want

    def test_requires_two_rows(self):
        with pytest.raises(ValueError):
            ratio_report(Mask.stirling(), 1)
        with pytest.raises(ValueError):
            upper_ratio(Mask.stirling(), 1)


class TestBoundingSequence:
    def test_strictly_increasing_and_below_limit(self):
        # a_n = e^(1 + 1/2 + ... + 1/(n-1)) / n grows strictly and stays
        # under e^gamma, itself under 1.7811
        with mpmath.workdps(50):
            prev = None
            for n in range(2, 201):
                lam = h_dot(n, Mask.stirling())
                a_n = mpmath.e ** (mpmath.mpf(lam.numerator) / lam.denominator) / n
                if prev is not None:
                    assert a_n > prev
                prev = a_n
            cap = mpmath.e**mpmath.euler
            assert prev < cap
            assert cap < mpmath.mpf("1.7811")
