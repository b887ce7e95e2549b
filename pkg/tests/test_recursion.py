from fractions import Fraction
from itertools import permutations, product

import pytest

from conseq_lab.core import reduce
from conseq_lab.recursion import (H_closed, H_oracle, L_closed, L_oracle, M_closed, M_oracle,
                                  Mtilde_closed, Mtilde_oracle, beta, comb, grade_L,
                                  verify_monotone_recursion, verify_nonoverlapping_recursion,
                                  verify_sandwich, verify_word_recursion)


def chain_probability(v, k):
    """Direct enumeration oracle for L_k."""
    d = len(v)
    length = (k + 1) * d - k
    hits = 0
    total = 0
    for p in permutations(range(length)):
        total += 1
        hits += all(reduce(p[j * (d - 1):j * (d - 1) + d]) == v for j in range(k + 1))
    return Fraction(hits, total)


def test_comb_outside_range_is_zero():
    assert comb(3, 5) == 0 and comb(-1, 0) == 0 and comb(5, 2) == 10


@pytest.mark.parametrize("k", [0, 1, 2])
def test_L_oracle_matches_enumeration(k):
    assert L_oracle("132", k).value == chain_probability((1, 3, 2), k)


def test_L_oracle_known_values():
    assert [L_oracle("132", k).value for k in range(3)] == [Fraction(1, 6), Fraction(1, 40),
                                                            Fraction(1, 336)]
    assert [L_oracle("1342", k).value for k in range(3)] == [Fraction(1, 24), Fraction(1, 504),
                                                             Fraction(1, 12960)]
    assert L_oracle("132", 2, method="dp").value == L_oracle("132", 2, method="brute").value


def test_closed_forms_are_graded_not_trusted():
    rows = grade_L("132", 2)
    assert [r["oracle"] for r in rows] == ["1/6", "1/40", "1/336"]
    # the closed form, read literally, does not reproduce the oracle
    assert not all(r["match"] for r in rows)
    assert L_closed("132", 1).source == "closed_form"


def test_errors_for_wrong_pattern_class():
    with pytest.raises(ValueError, match="non-overlapping"):
        L_oracle("123", 1)
    with pytest.raises(ValueError, match="v_1 < v_d"):
        H_oracle("231", 4, 0)
    with pytest.raises(ValueError, match="monotone"):
        verify_monotone_recursion("132")
    with pytest.raises(ValueError):
        Mtilde_closed(3, 0)


def test_H_oracle_against_word_enumeration():
    assert H_oracle("132", 4, 0).value == Fraction(4, 64)
    k, hits = 4, 0
    for w in product(range(1, k + 1), repeat=5):
        hits += (len(set(w[:3])) == 3 and reduce(w[:3]) == (1, 3, 2)
                 and len(set(w[2:])) == 3 and reduce(w[2:]) == (1, 3, 2))
    assert H_oracle("132", 4, 1).value == Fraction(hits, k**5)
    assert H_oracle("132", 3, 2).value == 0
    assert H_closed("132", 4, 0).source == "closed_form"


def test_monotone_coefficients():
    assert M_oracle(3, 1).value == Fraction(1, 8)
    assert Mtilde_oracle(3, 0).value == Fraction(1, 6)
    assert M_closed(3, 1).value != M_oracle(3, 1).value


@pytest.mark.parametrize("v", ["132", "213", "231", "312", "1342"])
def test_nonoverlapping_recursion_vanishes(v):
    rep = verify_nonoverlapping_recursion(v, 14)
    assert rep.holds and rep.sign_convention == "proof"


def test_recursion_residuals_are_nonzero_with_a_wrong_coefficient():
    rep = verify_nonoverlapping_recursion("132", 12, coefficients="closed")
    assert not rep.holds


@pytest.mark.parametrize("k", [3, 4])
def test_word_recursion_eventually_vanishes(k):
    rep = verify_word_recursion("132", k, 12)
    assert rep.detected_n0 is not None and rep.detected_n0 <= 8


def test_monotone_recursion_corrected_tail():
    rep = verify_monotone_recursion("123", 14)
    assert all(r["holds"] for r in rep.conventions["corrected"])
    assert rep.sign_convention is None and rep.notes


@pytest.mark.parametrize("v", ["123", "132"])
def test_sandwich(v):
    rep = verify_sandwich(v, 3, 16)
    assert rep.holds and rep.rows[0]["n"] > 3 + 2 * 3
    assert verify_sandwich(v, 2, 12, "words", 4).holds
    early = verify_sandwich(v, 3, 16, n_min=3)
    assert early.skipped == list(range(3, 10))
    assert beta(v, 3) > 0
