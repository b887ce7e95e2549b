from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from conseq_lab.core import (Pattern, Word, all_patterns, complement, complement_word,
                             count_consecutive, is_monotone, is_nonoverlapping,
                             is_standard_form, overlap_set, reduce, reverse, standardize,
                             symmetry_orbit)

patterns = st.integers(2, 6).flatmap(lambda d: st.permutations(list(range(1, d + 1))))
words = st.lists(st.integers(1, 5), min_size=0, max_size=12)


def test_parse_forms_agree():
    assert Pattern.parse("1342") == Pattern.parse("1,3,4,2") == Pattern.parse([1, 3, 4, 2])
    assert str(Pattern.parse("1,3,2")) == "132"
    long = Pattern(tuple(range(1, 11)))
    assert str(long) == "1,2,3,4,5,6,7,8,9,10"
    assert Pattern.parse(str(long)) == long


@pytest.mark.parametrize("bad", ["1", "113", "124", ""])
def test_pattern_rejects_non_permutations(bad):
    with pytest.raises(ValueError):
        Pattern.parse(bad)


def test_word_alphabet_is_part_of_value():
    assert Word.parse("eps", 3).letters == ()
    assert Word((1, 2), 2) != Word((1, 2), 3)
    with pytest.raises(ValueError):
        Word((1, 4), 3)


def test_reduce_examples():
    assert reduce((5, 1, 3)) == (3, 1, 2)
    assert reduce((4, 4, 1)) == (2, 2, 1)
    assert reduce((7,)) == (1,)
    with pytest.raises(ValueError, match="empty sequence"):
        reduce(())


def test_count_consecutive_examples():
    assert count_consecutive("132", (1, 3, 2, 5, 4)) == 2
    assert count_consecutive("12", (3, 2, 1)) == 0
    assert count_consecutive("123", (1, 2)) == 0
    # words with repeated letters never match a permutation window
    assert count_consecutive("12", (1, 1, 1)) == 0


def test_overlap_sets_and_classes():
    assert overlap_set("132") == {1}
    assert overlap_set("123") == {1, 2}
    assert is_nonoverlapping("1342") and not is_nonoverlapping("1234")
    assert is_monotone("321") and not is_monotone("132")
    with pytest.raises(ValueError, match="d<3"):
        is_monotone("12")


def test_standard_form():
    assert is_standard_form("132")
    assert not is_standard_form("231")
    assert standardize("231") == Pattern.parse("132")
    for v in all_patterns(4):
        s = standardize(v)
        assert is_standard_form(s) and s in symmetry_orbit(v)


@given(words)
def test_reduce_is_idempotent(w):
    if w:
        assert reduce(reduce(w)) == reduce(w)


@given(patterns, words)
def test_count_invariant_under_reversal(v, w):
    v = Pattern(tuple(v))
    assert count_consecutive(v, w) == count_consecutive(reverse(v), w[::-1])


@given(patterns, words)
def test_count_invariant_under_complement(v, w):
    v = Pattern(tuple(v))
    assert count_consecutive(v, w) == count_consecutive(complement(v), complement_word(w, 5))


def test_count_against_definition_for_all_of_s5():
    # independent oracle: compare each window's argsort
    for v in all_patterns(3):
        for p in permutations(range(1, 6)):
            want = sum(1 for j in range(3)
                       if tuple(sorted(range(3), key=lambda i: p[j + i])) ==
                       tuple(sorted(range(3), key=lambda i: v.entries[i])))
            assert count_consecutive(v, p) == want
