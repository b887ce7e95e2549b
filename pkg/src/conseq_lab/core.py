"""Patterns, words, reduction and consecutive-occurrence counting.

A pattern is a permutation of ``1..d`` (``d >= 2``) in one-line notation.
A word is a finite sequence over the alphabet ``1..k``; it remembers ``k``.
Both are immutable tuples underneath, so they hash and compare by value.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Pattern:
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", entries)
        d = len(entries)
        if d < 2:
            raise ValueError("pattern must have length at least 2")
        if sorted(entries) != list(range(1, d + 1)):
            raise ValueError(f"not a permutation of 1..{d}: {entries}")

    @classmethod
    def parse(cls, text: str | Sequence[int] | "Pattern") -> "Pattern":
        """Accept ``"1342"``, ``"10,1,2,..."``, a sequence of ints, or a Pattern."""
        if isinstance(text, Pattern):
            return text
        if not isinstance(text, str):
            return cls(tuple(text))
        text = text.strip()
        if "," in text:
            return cls(tuple(int(t) for t in text.split(",")))
        return cls(tuple(int(c) for c in text))

    @property
    def d(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __str__(self) -> str:
        if self.d <= 9:
            return "".join(str(x) for x in self.entries)
        return ",".join(str(x) for x in self.entries)

    def __repr__(self) -> str:
        return f"Pattern({str(self)!r})"

    def __lt__(self, other: "Pattern") -> bool:
        return (self.d, self.entries) < (other.d, other.entries)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        letters = tuple(int(x) for x in self.letters)
        object.__setattr__(self, "letters", letters)
        if self.k < 1:
            raise ValueError("alphabet size must be at least 1")
        for x in letters:
            if not 1 <= x <= self.k:
                raise ValueError(f"letter {x} outside alphabet [1..{self.k}]")

    @classmethod
    def parse(cls, text: str, k: int) -> "Word":
        text = text.strip()
        if text in ("", "e", "eps"):
            return cls((), k)
        if "," in text:
            return cls(tuple(int(t) for t in text.split(",")), k)
        return cls(tuple(int(c) for c in text), k)

    def __len__(self) -> int:
        return len(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __iter__(self):
        return iter(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return ""
        if self.k <= 9:
            return "".join(str(x) for x in self.letters)
        return ",".join(str(x) for x in self.letters)


def all_patterns(d: int) -> list[Pattern]:
    from itertools import permutations

    return [Pattern(p) for p in permutations(range(1, d + 1))]


def _seq(w) -> tuple[int, ...]:
    if isinstance(w, Pattern):
        return w.entries
    if isinstance(w, Word):
        return w.letters
    return tuple(w)


def reduce(w: Iterable[int]) -> tuple[int, ...]:
    """Replace each letter by its rank among the distinct letters (ties kept).

    >>> reduce((5, 1, 3))
    (3, 1, 2)
    >>> reduce((4, 4, 1))
    (2, 2, 1)
    """
    seq = _seq(w)
    if not seq:
        raise ValueError("empty sequence")
    rank = {x: i + 1 for i, x in enumerate(sorted(set(seq)))}
    return tuple(rank[x] for x in seq)


def count_consecutive(v, w) -> int:
    """Number of windows of ``w`` (length ``len(v)``) that reduce to ``v``."""
    v = _seq(Pattern.parse(v) if isinstance(v, str) else v)
    w = _seq(w)
    d = len(v)
    if d > len(w):
        return 0
    return sum(1 for j in range(len(w) - d + 1) if reduce(w[j:j + d]) == v)


def overlap_set(v: Pattern) -> frozenset[int]:
    """Indices ``i`` in ``1..d-1`` whose length-i prefix and suffix reduce alike."""
    v = Pattern.parse(v)
    e, d = v.entries, v.d
    return frozenset(i for i in range(1, d) if reduce(e[:i]) == reduce(e[d - i:]))


def _require_d3(v: Pattern) -> None:
    if v.d < 3:
        raise ValueError("classification undefined for d<3")


def is_monotone(v: Pattern) -> bool:
    v = Pattern.parse(v)
    _require_d3(v)
    inc = tuple(range(1, v.d + 1))
    return v.entries in (inc, inc[::-1])


def is_nonoverlapping(v: Pattern) -> bool:
    v = Pattern.parse(v)
    _require_d3(v)
    return overlap_set(v) == frozenset({1})


def reverse(v: Pattern) -> Pattern:
    v = Pattern.parse(v)
    return Pattern(v.entries[::-1])


def complement(v: Pattern) -> Pattern:
    v = Pattern.parse(v)
    return Pattern(tuple(v.d + 1 - x for x in v.entries))


def complement_word(w: Sequence[int], k: int) -> tuple[int, ...]:
    """Map each letter ``x`` of a word over ``[k]`` to ``k+1-x``."""
    return tuple(k + 1 - x for x in w)


def symmetry_orbit(v: Pattern) -> list[Pattern]:
    v = Pattern.parse(v)
    return [v, reverse(v), complement(v), reverse(complement(v))]


def is_standard_form(v: Pattern) -> bool:
    v = Pattern.parse(v)
    first, last = v.entries[0], v.entries[-1]
    return first < last and first + last <= v.d + 1


def standardize(v: Pattern) -> Pattern:
    """Lexicographically smallest orbit member in standard form."""
    candidates = sorted(p for p in set(symmetry_orbit(v)) if is_standard_form(p))
    if not candidates:  # cannot happen for d >= 2
        raise AssertionError(f"no standard form in orbit of {v}")
    return candidates[0]
