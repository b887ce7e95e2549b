import math
from fractions import Fraction
from itertools import product

import pytest

from conseq_lab.core import all_patterns, complement, count_consecutive, reverse
from conseq_lab.enumeration import (PERMS, WORDS, BudgetExceeded, CountTable,
                                    brute_perm_counts, brute_table, brute_word_counts,
                                    dp_perm_counts, dp_word_counts, monte_carlo_a,
                                    perm_table, perms_from_words)


def test_brute_perm_against_python_loop():
    from itertools import permutations

    for v in ("132", "123", "2143"):
        for n in range(1, 7):
            tally = [0] * max(n - len(v) + 2, 1)
            for p in permutations(range(1, n + 1)):
                tally[count_consecutive(v, p)] += 1
            assert brute_perm_counts(v, n) == tuple(tally)


def test_brute_words_against_python_loop():
    for v, k in (("132", 3), ("12", 2)):
        for n in range(0, 6):
            tally = [0] * max(n - len(v) + 2, 1)
            for w in product(range(1, k + 1), repeat=n):
                tally[count_consecutive(v, w)] += 1
            assert brute_word_counts(v, k, n) == tuple(tally)


def test_trivial_word_counts():
    assert all(row[0] == 1 for row in dp_word_counts("12", 1, 6).rows)
    for k in range(1, 6):
        assert brute_word_counts("12", k, 2)[0] == k * (k + 1) // 2
    assert sum(brute_word_counts("132", 3, 5)) == 243
    assert dp_word_counts("12", 3, 3, 0).count(3, 0) == 10


def test_count_123_length_3():
    assert dp_perm_counts("123", 3).rows[3][:2] == (5, 1)


@pytest.mark.parametrize("v", [str(v) for v in all_patterns(3)] + ["1342", "2413"])
def test_dp_perms_equals_brute(v):
    assert dp_perm_counts(v, 8, 8).rows == brute_table(v, PERMS, 8, 8).rows


@pytest.mark.parametrize("v", ["132", "123", "1342"])
@pytest.mark.parametrize("k", [2, 3, 4])
def test_dp_words_equals_brute(v, k):
    assert dp_word_counts(v, k, 7, 3).rows == brute_table(v, WORDS, 7, 3, k).rows


def test_row_sums_and_vanishing():
    for table in (dp_perm_counts("1342", 12, 3), dp_word_counts("132", 4, 10, 2)):
        table.check()


def test_symmetry_of_tables():
    for v in all_patterns(4):
        base = dp_perm_counts(v, 9, 3).rows
        assert dp_perm_counts(reverse(v), 9, 3).rows == base
        assert dp_perm_counts(complement(v), 9, 3).rows == base
        assert dp_word_counts(reverse(v), 3, 7, 2).rows == dp_word_counts(v, 3, 7, 2).rows


def test_csv_and_json_round_trip():
    t = dp_word_counts("132", 3, 6, 1)
    assert CountTable.from_csv(t.to_csv(), "132", WORDS, 3).rows == t.rows
    assert t.to_csv().splitlines()[3] == "0,2+,0"
    back = CountTable.from_json(t.to_json())
    assert back.rows == t.rows and back.k == 3


def test_perms_from_words():
    assert perms_from_words("132", 8, 2) == dp_perm_counts("132", 8, 2).count(8, 2)
    with pytest.raises(KeyError, match=r"\[2, 3\]"):
        perms_from_words("132", 3, 0, {1: dp_word_counts("132", 1, 3, 0)})


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        brute_perm_counts("132", 11)
    with pytest.raises(BudgetExceeded):
        dp_perm_counts("1342", 12, 2, budget=10)


def test_probabilities_are_normalized_counts():
    a = perm_table("132", 10, 0)
    assert a(1) == Fraction(5, 6)
    assert a(0) == 1 and a(-3) == 1
    assert a(8) == Fraction(dp_perm_counts("132", 10, 0).count(10, 0), math.factorial(10))


def test_monte_carlo_is_reproducible_and_close():
    exact = float(perm_table("132", 8, 0)(6))
    p, se = monte_carlo_a("132", 6, 40_000, seed=3)
    assert monte_carlo_a("132", 6, 40_000, seed=3) == (p, se)
    assert abs(p - exact) < 4 * se
    assert monte_carlo_a("132", 6, 40_000, seed=4) != (p, se)
