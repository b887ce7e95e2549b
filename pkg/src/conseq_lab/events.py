"""Probabilities of prescribed-window events in uniform permutations and words.

An event is a list of ``(start, pattern)`` constraints: the window of the
sequence beginning at 1-based position ``start`` with length
``len(pattern)`` must reduce to ``pattern``.  Counts are exact.  The DP
routes keep the ranks (or letters) of the trailing entries that a later
constraint can still see; the brute routes enumerate everything and exist
to check the DPs.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Sequence

from .core import reduce

Constraint = tuple[int, tuple[int, ...]]


def _normalize(constraints: Sequence[Constraint]) -> tuple[Constraint, ...]:
    return tuple(sorted((int(s), tuple(p)) for s, p in constraints))


def _by_end(constraints, length):
    ends: dict[int, list[tuple[int, ...]]] = {}
    for start, pat in constraints:
        end = start + len(pat) - 1
        if start < 1 or end > length:
            raise ValueError(f"constraint {start, pat} outside length {length}")
        ends.setdefault(end, []).append(pat)
    return ends


def _holds(seq, constraints) -> bool:
    for start, pat in constraints:
        window = seq[start - 1:start - 1 + len(pat)]
        if len(set(window)) != len(pat) or reduce(window) != pat:
            return False
    return True


def brute_perm_event(length: int, constraints, cap: int = 10) -> int:
    """Number of permutations of ``[length]`` satisfying every constraint."""
    if length > cap:
        raise ValueError(f"oracle cap exceeded: {length} > {cap}")
    constraints = _normalize(constraints)
    return sum(1 for p in permutations(range(1, length + 1)) if _holds(p, constraints))


def brute_word_event(k: int, length: int, constraints, cap: int = 10**7) -> int:
    if k**length > cap:
        raise ValueError(f"oracle cap exceeded: {k}^{length} > {cap}")
    constraints = _normalize(constraints)
    return sum(1 for w in product(range(1, k + 1), repeat=length) if _holds(w, constraints))


@lru_cache(maxsize=512)
def _perm_event(length: int, constraints: tuple[Constraint, ...]) -> int:
    ends = _by_end(constraints, length)
    memory = max((len(p) for _, p in constraints), default=1) - 1
    # state: ranks, within the current prefix, of its last `memory` entries
    states: dict[tuple[int, ...], int] = {(): 1}
    for m in range(length):
        pos = m + 1
        checks = ends.get(pos, ())
        nxt: dict[tuple[int, ...], int] = {}
        for state, cnt in states.items():
            for r in range(1, m + 2):
                shifted = tuple(x + (x >= r) for x in state) + (r,)
                if checks and not all(reduce(shifted[-len(p):]) == p for p in checks):
                    continue
                key = shifted[-memory:] if memory else ()
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    return sum(states.values())


def perm_event_count(length: int, constraints) -> int:
    """Exact count of permutations of ``[length]`` meeting the constraints."""
    return _perm_event(length, _normalize(constraints))


def perm_event_probability(length: int, constraints) -> Fraction:
    return Fraction(perm_event_count(length, constraints), math.factorial(length))


@lru_cache(maxsize=512)
def _word_event(k: int, length: int, constraints: tuple[Constraint, ...]) -> int:
    ends = _by_end(constraints, length)
    memory = max((len(p) for _, p in constraints), default=1) - 1
    states: dict[tuple[int, ...], int] = {(): 1}
    for m in range(length):
        pos = m + 1
        checks = ends.get(pos, ())
        nxt: dict[tuple[int, ...], int] = {}
        for state, cnt in states.items():
            for a in range(1, k + 1):
                ext = state + (a,)
                if checks and not all(
                    len(set(ext[-len(p):])) == len(p) and reduce(ext[-len(p):]) == p
                    for p in checks
                ):
                    continue
                key = ext[-memory:] if memory else ()
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    return sum(states.values())


def word_event_count(k: int, length: int, constraints) -> int:
    """Exact count of words in ``[k]^length`` meeting the constraints."""
    return _word_event(k, length, _normalize(constraints))


def word_event_probability(k: int, length: int, constraints) -> Fraction:
    return Fraction(word_event_count(k, length, constraints), k**length)
