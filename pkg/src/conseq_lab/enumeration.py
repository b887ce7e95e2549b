"""Exact counts g_r^v(S_n) and g_r^v([k]^n).

Two independent routes are provided for each universe:

* ``brute_*`` enumerate every permutation/word with numpy and test each
  window with the strict chain ``w[pi_1] < w[pi_2] < ... < w[pi_d]``
  (``pi`` the inverse of ``v``).
* ``dp_*`` are polynomial dynamic programs; the permutation DP tracks the
  ranks of the last ``d-1`` entries among the prefix, the word DP tracks the
  last ``d-1`` letters.  Both carry the occurrence count so far, capped at
  ``r_max + 1`` (the overflow bucket) so row sums stay checkable.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Mapping

import numpy as np

from .core import Pattern, reduce

PERMS = "perms"
WORDS = "words"

DEFAULT_PERM_CAP = 10
DEFAULT_WORD_CAP = 10**8
DEFAULT_STATE_BUDGET = 5 * 10**6


class BudgetExceeded(RuntimeError):
    """Raised when an oracle cap or DP state budget would be exceeded."""


@dataclass(frozen=True)
class CountTable:
    """Exact counts indexed by ``(n, r)`` for ``n = 0..n_max``.

    ``rows[n]`` has ``r_max + 2`` entries: ``r = 0..r_max`` followed by the
    overflow bucket (words/permutations with more than ``r_max`` occurrences).
    """

    pattern: Pattern
    universe: str
    rows: tuple[tuple[int, ...], ...]
    r_max: int
    k: int | None = None
    engine: str = "dp"

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def count(self, n: int, r: int) -> int:
        if not 0 <= n <= self.n_max:
            raise KeyError(f"n={n} not in table (n_max={self.n_max})")
        if r < 0:
            raise KeyError("r must be nonnegative")
        if r > self.r_max:
            if n - self.pattern.d + 1 < r:
                return 0
            raise KeyError(f"r={r} exceeds r_max={self.r_max}")
        return self.rows[n][r]

    def overflow(self, n: int) -> int:
        return self.rows[n][-1]

    def cumulative(self, n: int, r: int) -> int:
        """f_r: number of elements with at most ``r`` occurrences."""
        return sum(self.count(n, j) for j in range(r + 1))

    def universe_size(self, n: int) -> int:
        return math.factorial(n) if self.universe == PERMS else self.k**n

    def row_sum(self, n: int) -> int:
        return sum(self.rows[n])

    def check(self) -> None:
        d = self.pattern.d
        for n, row in enumerate(self.rows):
            if sum(row) != self.universe_size(n):
                raise AssertionError(f"row {n} sums to {sum(row)}")
            for r in range(max(1, n - d + 2), self.r_max + 1):
                if row[r]:
                    raise AssertionError(f"g_{r}(n={n}) should vanish")

    # serialization -------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["n", "r", "count"])
        for n, row in enumerate(self.rows):
            for r in range(self.r_max + 1):
                out.writerow([n, r, row[r]])
            out.writerow([n, f"{self.r_max + 1}+", row[-1]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, pattern, universe: str, k: int | None = None,
                 engine: str = "dp") -> "CountTable":
        data: dict[int, dict[str, int]] = {}
        for rec in csv.DictReader(io.StringIO(text)):
            data.setdefault(int(rec["n"]), {})[rec["r"]] = int(rec["count"])
        n_max = max(data)
        r_max = max(int(r) for r in data[0] if not r.endswith("+"))
        rows = []
        for n in range(n_max + 1):
            row = [data[n][str(r)] for r in range(r_max + 1)]
            row.append(data[n][f"{r_max + 1}+"])
            rows.append(tuple(row))
        return cls(Pattern.parse(pattern), universe, tuple(rows), r_max, k, engine)

    def to_json_obj(self) -> dict:
        obj = {"pattern": str(self.pattern), "universe": self.universe}
        if self.k is not None:
            obj["k"] = self.k
        obj["r_max"] = self.r_max
        obj["rows"] = [
            {"n": n, "r": r, "count": str(row[r])}
            for n, row in enumerate(self.rows) for r in range(self.r_max + 1)
        ]
        obj["overflow"] = [{"n": n, "count": str(row[-1])}
                           for n, row in enumerate(self.rows)]
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CountTable":
        obj = json.loads(text)
        r_max = obj["r_max"]
        n_max = max(rec["n"] for rec in obj["rows"])
        rows = [[0] * (r_max + 2) for _ in range(n_max + 1)]
        for rec in obj["rows"]:
            rows[rec["n"]][rec["r"]] = int(rec["count"])
        for rec in obj.get("overflow", []):
            rows[rec["n"]][-1] = int(rec["count"])
        return cls(Pattern.parse(obj["pattern"]), obj["universe"],
                   tuple(tuple(r) for r in rows), r_max, obj.get("k"))


@dataclass(frozen=True)
class ProbTable:
    """Normalized counts a_n^(r) (permutations) or h_{k,n}^(r) (words).

    ``value(n, r)`` is ``g_{r-1}(len n+d-1) / |universe|``; lengths below
    zero are treated as the empty sample, so ``value(n, 1) = 1`` for
    ``n <= 0``.
    """

    table: CountTable
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def value(self, n: int, r: int = 1) -> Fraction:
        key = (n, r)
        if key not in self._cache:
            length = n + self.table.pattern.d - 1
            if length < 0:
                val = Fraction(1 if r == 1 else 0)
            else:
                val = Fraction(self.table.count(length, r - 1),
                               self.table.universe_size(length))
            self._cache[key] = val
        return self._cache[key]

    __call__ = value

    @property
    def n_max(self) -> int:
        return self.table.n_max - self.table.pattern.d + 1


# brute-force oracles ------------------------------------------------------

def _chain_hits(arr: np.ndarray, v: Pattern) -> np.ndarray:
    """Per-row number of windows of ``arr`` that are occurrences of ``v``."""
    d = v.d
    inv = [0] * d
    for pos, val in enumerate(v.entries):
        inv[val - 1] = pos
    n = arr.shape[1]
    hits = np.zeros(arr.shape[0], dtype=np.int64)
    for j in range(n - d + 1):
        ok = np.ones(arr.shape[0], dtype=bool)
        for t in range(d - 1):
            ok &= arr[:, j + inv[t]] < arr[:, j + inv[t + 1]]
        hits += ok
    return hits


@lru_cache(maxsize=16)
def _all_perms(n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    return np.array(list(permutations(range(n))), dtype=np.int8)


def brute_perm_counts(v, n: int, cap: int = DEFAULT_PERM_CAP) -> tuple[int, ...]:
    """Tally ``con_v`` over all of S_n; entry ``r`` of the result is g_r(S_n)."""
    v = Pattern.parse(v)
    if n > cap:
        raise BudgetExceeded(f"oracle cap exceeded: n={n} > cap={cap}")
    hits = _chain_hits(_all_perms(n), v)
    size = max(n - v.d + 2, 1)
    return tuple(int(x) for x in np.bincount(hits, minlength=size))


def brute_word_counts(v, k: int, n: int, cap: int = DEFAULT_WORD_CAP,
                      chunk: int = 1 << 20) -> tuple[int, ...]:
    """Tally ``con_v`` over all k^n words, in chunks of mixed-radix indices."""
    v = Pattern.parse(v)
    total = k**n
    if total > cap:
        raise BudgetExceeded(f"oracle cap exceeded: k^n={total} > cap={cap}")
    size = max(n - v.d + 2, 1)
    tally = np.zeros(size, dtype=np.int64)
    powers = np.array([k**(n - 1 - p) for p in range(n)], dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        words = (idx[:, None] // powers[None, :]) % k if n else np.zeros((len(idx), 0))
        tally += np.bincount(_chain_hits(words, v), minlength=size)[:size]
    return tuple(int(x) for x in tally)


def brute_table(v, universe: str, n_max: int, r_max: int | None = None,
                k: int | None = None) -> CountTable:
    v = Pattern.parse(v)
    if r_max is None:
        r_max = max(n_max - v.d + 1, 0)
    rows = []
    for n in range(n_max + 1):
        full = brute_perm_counts(v, n) if universe == PERMS else brute_word_counts(v, k, n)
        rows.append(_cap_row(list(full), r_max))
    return CountTable(v, universe, tuple(rows), r_max, k, engine="brute")


def _cap_row(full: list[int], r_max: int) -> tuple[int, ...]:
    full = full + [0] * (r_max + 1 - len(full))
    return tuple(full[:r_max + 1]) + (sum(full[r_max + 1:]),)


# permutation DP -----------------------------------------------------------

def _perm_state_count(d: int, m: int) -> int:
    return math.perm(m, d - 1) if m >= d - 1 else 0


@lru_cache(maxsize=256)
def _dp_perm(v: Pattern, n_max: int, r_max: int, budget: int) -> CountTable:
    d = v.d
    R = r_max + 1  # overflow slot
    target_tail = reduce(v.entries[1:]) if d > 2 else (1,)
    first = v.entries[0]

    rows: list[tuple[int, ...]] = []
    for m in range(min(n_max, d - 1) + 1):
        rows.append(_cap_row([math.factorial(m)], r_max))
    if n_max < d - 1:
        return CountTable(v, PERMS, tuple(rows), r_max, None, "dp")

    peak = _perm_state_count(d, n_max)
    if peak * (R + 1) > budget:
        raise BudgetExceeded(
            f"state budget exceeded: {peak} states x {R + 1} buckets > {budget}")

    # state: ranks (a_1, ..., a_{d-1}) of the last d-1 entries within [1..m];
    # stored as key (a_2..a_{d-1}) -> list over a_1 of per-r counts
    m = d - 1
    table: dict[tuple[int, ...], list[list[int]]] = {}
    for p in permutations(range(1, m + 1)):
        slot = table.setdefault(p[1:], [[0] * (R + 1) for _ in range(m + 1)])
        slot[p[0]][0] += 1

    while m < n_max:
        prefix = {}
        for key, lst in table.items():
            acc = [0] * (R + 1)
            pre = [list(acc)]
            for a1 in range(1, m + 1):
                acc = [x + y for x, y in zip(acc, lst[a1])]
                pre.append(acc)
            prefix[key] = pre

        new: dict[tuple[int, ...], list[list[int]]] = {}
        zero = [0] * (R + 1)
        for t in permutations(range(1, m + 2), d - 1):
            c = t[-1]
            b = t[:-1]
            old_key = tuple(x - (x > c) for x in b)
            pre = prefix.get(old_key)
            if pre is None:
                continue
            total = pre[m]
            if reduce(t) == target_tail:
                # a_1 must take rank `first` in the window (old coords: c sits at c-1/2)
                pts = sorted(old_key + (c - 0.5,))
                lo = 1 if first == 1 else math.floor(pts[first - 2]) + 1
                hi = m if first == d else math.ceil(pts[first - 1]) - 1
                if hi >= lo:
                    inside = [x - y for x, y in zip(pre[hi], pre[lo - 1])]
                    vec = [x - y for x, y in zip(total, inside)]
                    for r in range(R + 1):
                        vec[min(r + 1, R)] += inside[r]
                else:
                    vec = list(total)
            else:
                vec = list(total)
            if vec == zero:
                continue
            slot = new.setdefault(t[1:], [[0] * (R + 1) for _ in range(m + 2)])
            slot[t[0]] = vec
        table = new
        m += 1
        row = [0] * (R + 1)
        for lst in table.values():
            for vec in lst:
                for r in range(R + 1):
                    row[r] += vec[r]
        rows.append(tuple(row[:R]) + (row[R],))
    return CountTable(v, PERMS, tuple(rows), r_max, None, "dp")


def dp_perm_counts(v, n_max: int, r_max: int | None = None,
                   budget: int = DEFAULT_STATE_BUDGET) -> CountTable:
    """g_r^v(S_n) for ``n <= n_max``, ``r <= r_max`` by the rank-suffix DP.

    >>> dp_perm_counts("123", 3, 1).rows[3]
    (5, 1, 0)
    """
    v = Pattern.parse(v)
    if r_max is None:
        r_max = max(n_max - v.d + 1, 0)
    return _dp_perm(v, n_max, r_max, budget)


# word DP ------------------------------------------------------------------

@lru_cache(maxsize=64)
def _word_transitions(v: Pattern, k: int):
    """For each full state (last d-1 letters) and letter: (next state, hit)."""
    d = v.d
    trans = {}
    for idx in range(k ** (d - 1)):
        state = []
        x = idx
        for _ in range(d - 1):
            state.append(x % k + 1)
            x //= k
        state = tuple(reversed(state))
        moves = []
        for a in range(1, k + 1):
            window = state + (a,)
            hit = len(set(window)) == d and reduce(window) == v.entries
            moves.append((window[1:], hit))
        trans[state] = moves
    return trans


@lru_cache(maxsize=256)
def _dp_word(v: Pattern, k: int, n_max: int, r_max: int, budget: int) -> CountTable:
    d = v.d
    R = r_max + 1
    if k ** (d - 1) * (R + 1) > budget:
        raise BudgetExceeded(
            f"state budget exceeded: {k ** (d - 1)} states x {R + 1} buckets > {budget}")
    rows = [_cap_row([1], r_max)]
    cur: dict[tuple[int, ...], list[int]] = {(): [1] + [0] * R}
    trans = _word_transitions(v, k) if k ** (d - 1) <= budget else None
    for n in range(1, n_max + 1):
        nxt: dict[tuple[int, ...], list[int]] = {}
        for state, vec in cur.items():
            if len(state) < d - 1:
                for a in range(1, k + 1):
                    nxt[state + (a,)] = list(vec)
                continue
            for ns, hit in trans[state]:
                slot = nxt.get(ns)
                if slot is None:
                    slot = nxt[ns] = [0] * (R + 1)
                if hit:
                    for r in range(R + 1):
                        slot[min(r + 1, R)] += vec[r]
                else:
                    for r in range(R + 1):
                        slot[r] += vec[r]
        cur = nxt
        row = [0] * (R + 1)
        for vec in cur.values():
            for r in range(R + 1):
                row[r] += vec[r]
        rows.append(tuple(row))
    return CountTable(v, WORDS, tuple(rows), r_max, k, "dp")


def dp_word_counts(v, k: int, n_max: int, r_max: int | None = None,
                   budget: int = DEFAULT_STATE_BUDGET) -> CountTable:
    """g_r^v([k]^n) for ``n <= n_max`` via the last-(d-1)-letters DP."""
    v = Pattern.parse(v)
    if k < 1:
        raise ValueError("alphabet size must be at least 1")
    if r_max is None:
        r_max = max(n_max - v.d + 1, 0)
    return _dp_word(v, k, n_max, r_max, budget)


def perm_table(v, n_max: int, r_max: int | None = None) -> ProbTable:
    return ProbTable(dp_perm_counts(v, n_max, r_max))


def word_table(v, k: int, n_max: int, r_max: int | None = None) -> ProbTable:
    return ProbTable(dp_word_counts(v, k, n_max, r_max))


# words -> permutations ----------------------------------------------------

def perms_from_words(v, n: int, r: int,
                     word_counts: Mapping[int, CountTable] | None = None) -> int:
    """sum_{k=1}^{n} (-1)^(n-k) C(n,k) g_r^v([k]^n), which equals g_r^v(S_n).

    ``word_counts`` maps alphabet size to a word CountTable covering length
    ``n``; when omitted the tables are computed by :func:`dp_word_counts`.
    """
    v = Pattern.parse(v)
    if word_counts is None:
        word_counts = {k: dp_word_counts(v, k, n, r) for k in range(1, n + 1)}
    missing = [k for k in range(1, n + 1)
               if k not in word_counts or word_counts[k].n_max < n]
    if missing:
        raise KeyError(f"missing word counts for k in {missing}")
    return sum((-1) ** (n - k) * math.comb(n, k) * word_counts[k].count(n, r)
               for k in range(1, n + 1))


# Monte Carlo --------------------------------------------------------------

MC_CHUNK = 1 << 14


def monte_carlo_a(v, n: int, samples: int, seed: int) -> tuple[float, float]:
    """Estimate a_n^(1)(v) from ``samples`` i.i.d. uniform sequences.

    Uses numpy's PCG64 generator.  The root ``SeedSequence(seed)`` is spawned
    into one child stream per block of ``MC_CHUNK`` samples, so the result
    depends only on ``(v, n, samples, seed)``.  Returns the avoidance
    frequency and its binomial standard error.
    """
    v = Pattern.parse(v)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    length = n + v.d - 1
    n_blocks = -(-samples // MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    avoid = 0
    left = samples
    for child in children:
        size = min(MC_CHUNK, left)
        left -= size
        rng = np.random.Generator(np.random.PCG64(child))
        ys = rng.random((size, length))
        avoid += int(np.count_nonzero(_chain_hits(ys, v) == 0))
    p = avoid / samples
    return p, math.sqrt(p * (1 - p) / samples)
