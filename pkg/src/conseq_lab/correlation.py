"""Correlation matrices of instance sets and exact waiting-time transforms.

For a set ``I`` of length-``d`` words over ``[k]`` and a rational
``alpha`` in (0, 1), the alpha-correlation is

    (u*s) = sum_{i=1..d} (k/alpha)^i [last i letters of u == first i of s]

and ``R[u][s] = (u*s)``.  Starting from a history word ``t`` and feeding
uniform letters, ``T(t)`` is the first time the text ends with a word of
``I`` and ``x_s(t) = E[alpha^T(t) ; the hit word is s]``.  These satisfy,
for every ``q`` in ``I``,

    sum_s (s*q) x_s = (1 - X)/(1 - alpha) + (t*q) - (k/alpha)^d [t == q]

where ``X = sum_s x_s``.  The coefficient matrix is the transpose of ``R``,
so Cramer's rule replaces *rows* of ``R``: with ``c_t[q]`` the right-hand
constant above, ``R_{u,t}`` is ``R`` with row ``u`` set to ``c_t`` and
``R^u`` is ``R`` with row ``u`` set to ones.  Then

    X   = 1 - (1-alpha) (det R - sum_u det R_{u,t}) / D
    x_s = [(det R - sum_u det R_{u,t}) det R^s + D det R_{s,t}] / (D det R)
    D   = (1-alpha) det R + sum_u det R^u

For ``t = eps`` every ``c_t`` vanishes and the familiar two-term forms
remain.  Everything is exact; determinants use fraction-free elimination.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .core import Pattern, Word, count_consecutive
from .enumeration import dp_word_counts
from .recursion import decimal

WordT = tuple[int, ...]


class SingularSystem(ArithmeticError):
    pass


def _alpha(alpha) -> Fraction:
    a = Fraction(alpha)
    if not 0 < a < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {a}")
    return a


def _w(x) -> WordT:
    if isinstance(x, Word):
        return x.letters
    if isinstance(x, str):
        x = x.strip()
        if x in ("", "e", "eps"):
            return ()
        return tuple(int(t) for t in x.split(",")) if "," in x else tuple(int(c) for c in x)
    return tuple(int(c) for c in x)


def _fmt(w: WordT) -> str:
    if not w:
        return "eps"
    return "".join(map(str, w)) if max(w) <= 9 else ",".join(map(str, w))


@dataclass(frozen=True)
class InstanceSet:
    pattern: Pattern
    k: int
    instances: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def words(self) -> list[WordT]:
        return [w.letters for w in self.instances]


def instances(v, k: int) -> InstanceSet:
    """All words over ``[k]`` with distinct letters that reduce to ``v``, sorted."""
    v = Pattern.parse(v)
    if k < v.d:
        raise ValueError("alphabet smaller than pattern")
    words = sorted(tuple(sorted(A)[x - 1] for x in v.entries)
                   for A in combinations(range(1, k + 1), v.d))
    return InstanceSet(v, k, tuple(Word(w, k) for w in words))


def alpha_correlation(u, s, alpha, k: int) -> Fraction:
    """``(u*s)``; the empty word correlates to 0 with everything."""
    u, s = _w(u), _w(s)
    alpha = _alpha(alpha)
    if not u:
        return Fraction(0)
    if len(u) != len(s):
        raise ValueError(f"length mismatch: {len(u)} vs {len(s)}")
    d, q = len(u), Fraction(k) / alpha
    return sum((q**i for i in range(1, d + 1) if u[d - i:] == s[:i]), Fraction(0))


def bareiss_det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant: clear denominators row by row, then Bareiss on integers."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    rows, scale = [], Fraction(1)
    for row in matrix:
        row = [Fraction(x) for x in row]
        if len(row) != n:
            raise ValueError("matrix not square")
        den = math.lcm(*(x.denominator for x in row))
        rows.append([int(x * den) for x in row])
        scale /= den
    a, sign, prev = rows, 1, 1
    for i in range(n - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if a[r][i] != 0), None)
            if swap is None:
                return Fraction(0)
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
            a[r][i] = 0
        prev = a[i][i]
    return sign * a[n - 1][n - 1] * scale


@dataclass
class CorrMatrix:
    index: list[WordT]
    k: int
    alpha: Fraction
    entries: list[list[Fraction]]
    pattern: str | None = None
    note: str = "R"

    def det(self) -> Fraction:
        return bareiss_det(self.entries)

    def pos(self, word) -> int:
        w = _w(word)
        try:
            return self.index.index(w)
        except ValueError:
            raise KeyError(f"index word not in instance set: {_fmt(w)}") from None

    def to_json_obj(self) -> dict:
        return {"pattern": self.pattern, "k": self.k, "alpha": str(self.alpha),
                "matrix": self.note, "index": [_fmt(w) for w in self.index],
                "entries": [[str(x) for x in row] for row in self.entries]}


def build_R_for(index: Sequence, k: int, alpha, pattern: str | None = None) -> CorrMatrix:
    """Correlation matrix of an arbitrary set of equal-length words."""
    alpha = _alpha(alpha)
    idx = [_w(w) for w in index]
    if len({len(w) for w in idx}) > 1:
        raise ValueError("index words must share one length")
    ent = [[alpha_correlation(u, s, alpha, k) for s in idx] for u in idx]
    return CorrMatrix(idx, k, alpha, ent, pattern)


def build_R(v, k: int, alpha) -> CorrMatrix:
    inst = instances(v, k)
    return build_R_for(inst.words, k, alpha, str(inst.pattern))


def t_vector(base: CorrMatrix, t) -> list[Fraction]:
    """``c_t[q] = (t*q) - (k/alpha)^d [t == q]``: the constant side for history t."""
    t = _w(t)
    if not t:
        return [Fraction(0)] * len(base.index)
    full = (Fraction(base.k) / base.alpha) ** len(t)
    return [alpha_correlation(t, q, base.alpha, base.k) - (full if t == q else 0)
            for q in base.index]


def _replace_row(m: list[list[Fraction]], i: int, row) -> list[list[Fraction]]:
    out = [r[:] for r in m]
    out[i] = list(row)
    return out


def _replace_col(m: list[list[Fraction]], j: int, col) -> list[list[Fraction]]:
    out = [r[:] for r in m]
    for i, x in enumerate(col):
        out[i][j] = x
    return out


def build_R_modified(base: CorrMatrix, variant: str, u, s=None, t=()) -> CorrMatrix:
    """Modified correlation matrices.

    ``row_u``   R^u: row ``u`` replaced by ones.
    ``col_u_t`` R_{u,t}: row ``u`` replaced by ``t_vector(base, t)`` (the
                replacement that solves the transposed system; see module doc).
    ``col_u_t_printed`` literal column replacement by ((t*w))_w, kept for
                comparison only.
    ``both``    R^u_{s,t}: R_{s,t} with row ``u`` also replaced by ones.
    """
    ones = [Fraction(1)] * len(base.index)
    i = base.pos(u)
    if variant == "row_u":
        ent, note = _replace_row(base.entries, i, ones), f"R^{_fmt(base.index[i])}"
    elif variant == "col_u_t":
        ent = _replace_row(base.entries, i, t_vector(base, t))
        note = f"R_{{{_fmt(base.index[i])},{_fmt(_w(t))}}}"
    elif variant == "col_u_t_printed":
        col = [alpha_correlation(t, w, base.alpha, base.k) for w in base.index]
        ent = _replace_col(base.entries, i, col)
        note = f"R_{{{_fmt(base.index[i])},{_fmt(_w(t))}}} (column)"
    elif variant == "both":
        if s is None:
            raise ValueError("variant 'both' needs s")
        j = base.pos(s)
        ent = _replace_row(_replace_row(base.entries, j, t_vector(base, t)), i, ones)
        note = f"R^{_fmt(base.index[i])}_{{{_fmt(base.index[j])},{_fmt(_w(t))}}}"
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return CorrMatrix(base.index, base.k, base.alpha, ent, base.pattern, note)


@dataclass
class T1Solution:
    """E[alpha^T(t)] and its split over the first word hit."""
    t: WordT
    total: Fraction
    per_instance: dict[WordT, Fraction]
    det_R: Fraction
    denominator: Fraction

    def to_json_obj(self) -> dict:
        return {"t": _fmt(self.t), "value": str(self.total), "decimal": decimal(self.total),
                "per_instance": {_fmt(w): str(x) for w, x in self.per_instance.items()}}


class _Engine:
    """Caches the t-independent determinants of one correlation matrix."""

    def __init__(self, base: CorrMatrix):
        self.base = base
        n = len(base.index)
        self.det_R = base.det()
        self.det_Ru = [bareiss_det(_replace_row(base.entries, i, [Fraction(1)] * n))
                       for i in range(n)]
        a = base.alpha
        self.D = (1 - a) * self.det_R + sum(self.det_Ru)
        if self.D == 0:
            raise SingularSystem(f"singular system at alpha={a}")
        self._cache: dict[WordT, T1Solution] = {}

    def solve(self, t) -> T1Solution:
        t = _w(t)
        if t in self._cache:
            return self._cache[t]
        b, a = self.base, self.base.alpha
        if t:
            c = t_vector(b, t)
            det_Rt = [bareiss_det(_replace_row(b.entries, i, c)) for i in range(len(b.index))]
        else:
            det_Rt = [Fraction(0)] * len(b.index)
        num = self.det_R - sum(det_Rt)
        total = 1 - (1 - a) * num / self.D
        if self.det_R == 0:
            raise SingularSystem(f"det R vanishes at alpha={a}")
        per = {w: (num * self.det_Ru[i] + self.D * det_Rt[i]) / (self.D * self.det_R)
               for i, w in enumerate(b.index)}
        sol = T1Solution(t, total, per, self.det_R, self.D)
        self._cache[t] = sol
        return sol


@lru_cache(maxsize=64)
def _engine(index: tuple[WordT, ...], k: int, alpha: Fraction, pattern: str | None) -> _Engine:
    return _Engine(build_R_for(index, k, alpha, pattern))


def _engine_for(v, k: int, alpha) -> _Engine:
    inst = instances(v, k)
    return _engine(tuple(inst.words), k, _alpha(alpha), str(inst.pattern))


def expected_alpha_T1(v, k: int, alpha, t=()) -> Fraction:
    """E[alpha^{T(t)}], T the first time the text ends with an instance of v."""
    return _engine_for(v, k, alpha).solve(t).total


def expected_alpha_T1_split(v, k: int, alpha, t=()) -> T1Solution:
    return _engine_for(v, k, alpha).solve(t)


def expected_alpha_Tr_for(index: Sequence, k: int, alpha, r: int, t=()) -> Fraction:
    """E[alpha^{T^(r)}(t)] for an arbitrary word set, via
    E_r(t) = sum_u x_u(t) E_{r-1}(u) with E_0 = 1."""
    if r < 0:
        raise ValueError("r must be >= 0")
    eng = _engine(tuple(_w(w) for w in index), k, _alpha(alpha), None)
    return _tr(eng, r, _w(t), {})


def _tr(eng: _Engine, r: int, t: WordT, memo: dict) -> Fraction:
    if r == 0:
        return Fraction(1)
    key = (r, t)
    if key not in memo:
        sol = eng.solve(t)
        memo[key] = sum((x * _tr(eng, r - 1, u, memo) for u, x in sol.per_instance.items()),
                        Fraction(0))
    return memo[key]


def expected_alpha_Tr(v, k: int, alpha, r: int, t=()) -> Fraction:
    """E[alpha^{T^(r)}]: T^(r) is the r-th time the text ends with an instance."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return _tr(_engine_for(v, k, alpha), r, _w(t), {})


@dataclass
class GenfuncResult:
    pattern: str
    k: int
    alpha: Fraction
    r: int
    value: Fraction
    series: Fraction
    N: int
    tail_bound: Fraction
    agrees: bool

    def to_json_obj(self) -> dict:
        return {"pattern": self.pattern, "k": self.k, "alpha": str(self.alpha), "r": self.r,
                "value": str(self.value), "decimal": decimal(self.value),
                "series": str(self.series), "series_decimal": decimal(self.series),
                "N": self.N, "tail_bound": str(self.tail_bound), "agrees": self.agrees}


def required_terms(alpha, tol) -> int:
    """Smallest N with alpha^(N+1)/(1-alpha) <= tol."""
    alpha, tol = _alpha(alpha), Fraction(tol)
    n = 0
    while alpha ** (n + 1) / (1 - alpha) > tol:
        n += 1
    return n


def genfunc_value(v, k: int, alpha, r: int, N: int = 60, tol=None) -> GenfuncResult:
    """W_r = sum_{l>=1} g_r(v, [k]^l) (alpha/k)^l from the determinant formulas.

    Exactly r occurrences in the first l letters means T^(r) <= l < T^(r+1),
    and summing alpha^l over that range gives

        W_r = (E[alpha^{T^(r)}] - E[alpha^{T^(r+1)}]) / (1 - alpha) - [r == 0]

    (the last term drops the empty word).  The value is checked against
    the truncated series to ``N`` terms with tail bound alpha^(N+1)/(1-alpha).
    """
    v = Pattern.parse(v)
    alpha = _alpha(alpha)
    if r < 0:
        raise ValueError("r must be >= 0")
    tail = alpha ** (N + 1) / (1 - alpha)
    if tol is not None and tail > Fraction(tol):
        raise ValueError(f"truncation N={N} too small; need N >= {required_terms(alpha, tol)}")
    eng = _engine_for(v, k, alpha)
    memo: dict = {}
    lo = _tr(eng, r, (), memo)
    hi = _tr(eng, r + 1, (), memo)
    value = (lo - hi) / (1 - alpha) - (1 if r == 0 else 0)
    table = dp_word_counts(v, k, N, r)
    x = alpha / k
    series = sum((table.count(n, r) * x**n for n in range(1, N + 1)), Fraction(0))
    agrees = 0 <= value - series <= tail
    return GenfuncResult(str(v), k, alpha, r, value, series, N, tail, agrees)


def independence_check(v, k: int, alpha, N: int = 60) -> dict:
    """E[alpha^T] from determinants against 1 - (1-alpha)(1 + W_0) from counts.

    ``W_0`` is truncated at ``N``; the two agree within (1-alpha) times its
    tail bound.
    """
    alpha = _alpha(alpha)
    res = genfunc_value(v, k, alpha, 0, N)
    det_value = expected_alpha_T1(v, k, alpha)
    series_value = 1 - (1 - alpha) * (1 + res.series)
    bound = (1 - alpha) * res.tail_bound
    return {"determinant": det_value, "series": series_value, "bound": bound,
            "agrees": abs(det_value - series_value) <= bound}


@dataclass
class T1SystemReport:
    pattern: str | None
    k: int
    alpha: Fraction
    t: WordT
    residuals: dict[WordT, Fraction]
    sum_residual: Fraction
    printed_residuals: dict[WordT, Fraction] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.sum_residual == 0 and all(r == 0 for r in self.residuals.values())

    def to_json_obj(self) -> dict:
        return {"pattern": self.pattern, "k": self.k, "alpha": str(self.alpha),
                "t": _fmt(self.t), "holds": self.holds,
                "residuals": {_fmt(q): str(x) for q, x in self.residuals.items()},
                "sum_residual": str(self.sum_residual),
                "printed_residuals": {_fmt(q): str(x) for q, x in self.printed_residuals.items()}}


def verify_T1_system(v, k: int, alpha, t=(), index: Sequence | None = None) -> T1SystemReport:
    """Substitute the determinant solution into the linear system exactly.

    ``residuals`` use the system in the module docstring and must vanish.
    ``printed_residuals`` substitute the same solution into
    X + sum_s (s*q) x_s = (t*q), for comparison.
    """
    alpha = _alpha(alpha)
    if index is None:
        inst = instances(v, k)
        eng = _engine(tuple(inst.words), k, alpha, str(inst.pattern))
    else:
        eng = _engine(tuple(_w(w) for w in index), k, alpha, None)
    sol = eng.solve(t)
    base, X = eng.base, sol.total
    c = t_vector(base, t)
    res, printed = {}, {}
    for j, q in enumerate(base.index):
        lhs = sum((base.entries[i][j] * sol.per_instance[s] for i, s in enumerate(base.index)),
                  Fraction(0))
        res[q] = lhs - (1 - X) / (1 - alpha) - c[j]
        printed[q] = X + lhs - alpha_correlation(_w(t), q, alpha, k)
    total = sum(sol.per_instance.values(), Fraction(0)) - X
    return T1SystemReport(base.pattern, k, alpha, _w(t), res, total, printed)


def matches_nonoverlap_form(v, k: int, alpha) -> bool:
    """Entrywise check of the three-case form of R for a non-overlapping v."""
    v = Pattern.parse(v)
    R = build_R(v, k, alpha)
    q = Fraction(k) / R.alpha
    sets = sorted(combinations(range(1, k + 1), v.d),
                  key=lambda A: tuple(sorted(A)[x - 1] for x in v.entries))
    for i, A in enumerate(sets):
        for j, B in enumerate(sets):
            if A == B:
                want = q ** v.d
            elif A[v.entries[-1] - 1] == B[v.entries[0] - 1]:
                want = q
            else:
                want = Fraction(0)
            if R.entries[i][j] != want:
                return False
    return True


def occurrences_in(word, v) -> int:
    return count_consecutive(Pattern.parse(v), _w(word))
