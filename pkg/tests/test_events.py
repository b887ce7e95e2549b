from hypothesis import given, settings, strategies as st

from conseq_lab.events import (brute_perm_event, brute_word_event, perm_event_count,
                               word_event_count)

PATS = [(1, 2), (2, 1), (1, 3, 2), (2, 1, 3), (1, 2, 3), (2, 3, 1)]


@st.composite
def events(draw, max_len=7):
    length = draw(st.integers(3, max_len))
    cons = []
    for _ in range(draw(st.integers(0, 3))):
        pat = draw(st.sampled_from(PATS))
        start = draw(st.integers(1, length - len(pat) + 1))
        cons.append((start, pat))
    return length, cons


@settings(max_examples=60, deadline=None)
@given(events())
def test_perm_dp_matches_enumeration(ev):
    length, cons = ev
    assert perm_event_count(length, cons) == brute_perm_event(length, cons)


@settings(max_examples=40, deadline=None)
@given(events(max_len=6), st.integers(1, 4))
def test_word_dp_matches_enumeration(ev, k):
    length, cons = ev
    assert word_event_count(k, length, cons) == brute_word_event(k, length, cons)


def test_no_constraints_counts_everything():
    assert perm_event_count(5, []) == 120
    assert word_event_count(3, 4, []) == 81
