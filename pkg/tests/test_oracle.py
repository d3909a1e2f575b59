"""Tests for the exhaustive enumeration oracle."""

from collections import Counter
from itertools import permutations, product
from math import factorial

import pytest

from seqopt.numbers import Mask, triangle
from seqopt.oracle import (
    BudgetError,
    color_boards_count,
    histogram,
    optimization_set_bruteforce,
    partial_histogram,
    prefix_min_records,
)


def all_masks(max_k):
    for k in range(1, max_k + 1):
        for bits in product((0, 1), repeat=k + 1):
            yield Mask(bits)


class TestPrefixMinRecords:
    def test_examples(self):
        assert prefix_min_records((1, 2, 3)) == {1}
        assert prefix_min_records((3, 2, 1)) == {1, 2, 3}
        assert prefix_min_records((2, 3, 1)) == {1, 3}

    def test_position_one_always_included(self):
        for n in range(1, 7):
            for perm in permutations(range(1, n + 1)):
                assert 1 in prefix_min_records(perm)


class TestBruteforce:
    def test_example_points(self):
        assert optimization_set_bruteforce([(1, 2), (2, 3), (3, 1)]) == {(1, 2), (3, 1)}

    def test_singleton(self):
        assert optimization_set_bruteforce([(1, 1)]) == {(1, 1)}

    def test_strictly_decreasing_values_need_everything(self):
        pts = [(i, 5 - i) for i in range(1, 5)]
        assert optimization_set_bruteforce(pts) == set(pts)

    def test_size_cap(self):
        with pytest.raises(ValueError):
            optimization_set_bruteforce([(i, i) for i in range(13)])

    def test_specializes_to_prefix_minima(self):
        # the subset search and the linear scan must land on the same set
        for n in range(1, 7):
            for perm in permutations(range(1, n + 1)):
                found = optimization_set_bruteforce(list(enumerate(perm, start=1)))
                assert {i for i, _ in found} == prefix_min_records(perm)


class TestHistogram:
    def test_single_column_n_three(self):
        assert histogram(Mask.stirling(), 3).counts == {1: 2, 2: 3, 3: 1}

    def test_two_columns_n_two(self):
        assert histogram(Mask.from_string("011"), 2).counts == {1: 1, 2: 3}

    def test_complement_mask_counts_non_records(self):
        assert histogram(Mask.from_string("10"), 3).counts == {0: 1, 1: 3, 2: 2}

    def test_totals_and_support(self):
        for mask in all_masks(2):
            for n in range(1, 5):
                h = histogram(mask, n)
                assert h.total() == factorial(n) ** mask.k
                assert all(m in mask.support(n) for m in h.counts)

    def test_budget_refusal_names_the_tuple_count(self):
        with pytest.raises(BudgetError, match=str(factorial(4) ** 2)):
            histogram(Mask.from_string("011"), 4, budget=100)

    def test_matches_triangle(self):
        for mask in all_masks(2):
            nmax = 5 if mask.k == 1 else 4
            tri = triangle(mask, nmax)
            for n in range(1, nmax + 1):
                assert histogram(mask, n).counts == tri.row(n)

    def test_partition_merge_equals_full(self):
        for mask in (Mask.stirling(), Mask.from_string("011"), Mask.from_string("10")):
            n = 3 if mask.k > 1 else 4
            whole = histogram(mask, n)
            merged = Counter()
            for idx in range(factorial(n)):
                merged += partial_histogram(mask, n, idx)
            assert dict(sorted(merged.items())) == whole.counts

    def test_partial_index_validation(self):
        with pytest.raises(ValueError):
            partial_histogram(Mask.stirling(), 3, 6)
        with pytest.raises(ValueError):
            partial_histogram(Mask.stirling(), 3, -1)

    def test_partial_budget(self):
        with pytest.raises(BudgetError):
            partial_histogram(Mask.from_string("011"), 4, 0, budget=10)


class TestColorBoards:
    def test_single_board(self):
        assert color_boards_count([(1,)], Mask.from_string("01")) == 1
        assert color_boards_count([(1,)], Mask.from_string("00")) == 0
        assert color_boards_count([(1,), (1,)], Mask.from_string("011")) == 1
        assert color_boards_count([(1,), (1,)], Mask.from_string("010")) == 0

    def test_increasing_heights_all_visible(self):
        assert color_boards_count([(1, 2, 3, 4)], Mask.stirling()) == 4

    def test_example_board(self):
        # boards with heights 2,3,1: the third hides behind the second
        assert color_boards_count([(2, 3, 1)], Mask.stirling()) == 2

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            color_boards_count([(1, 2, 2)], Mask.stirling())
        with pytest.raises(ValueError):
            color_boards_count([(0, 1, 2)], Mask.stirling())
        with pytest.raises(ValueError):
            color_boards_count([(1, 2)], Mask.from_string("011"))

    def test_result_stays_in_support(self):
        perms = list(permutations((1, 2, 3)))
        for mask in all_masks(2):
            for heights in product(perms, repeat=mask.k):
                assert color_boards_count(heights, mask) in mask.support(3)

    def test_aggregation_reproduces_histogram(self):
        masks = (Mask.stirling(), Mask.from_string("10"),
                 Mask.from_string("011"), Mask.from_string("110"))
        perms = list(permutations((1, 2, 3)))
        for mask in masks:
            agg = Counter()
            for heights in product(perms, repeat=mask.k):
                agg[color_boards_count(heights, mask)] += 1
            assert dict(sorted(agg.items())) == histogram(mask, 3).counts
