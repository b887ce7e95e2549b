"""Chain coefficients and exact checks of the avoidance recursions.

Coefficients come in two flavours.  The *oracle* value is the probability
of the defining window event, counted exactly (by enumeration when small,
otherwise by the window-event DP in :mod:`conseq_lab.events`).  The
*closed* value evaluates the published nested-sum formula term by term,
with ``C(n, k) = 0`` unless ``0 <= k <= n`` and empty sums equal to 0.
Closed values are graded against oracles, never trusted on their own.

Every residual is an exact :class:`~fractions.Fraction`; a recursion
"holds" at ``n`` only when the residual is exactly zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .core import Pattern, is_monotone, is_nonoverlapping
from .enumeration import ProbTable, perm_table, word_table
from .events import (brute_perm_event, brute_word_event, perm_event_count,
                     word_event_count)

ORACLE_CAP = 10
# lengths up to this are enumerated under method="auto"; beyond, the DP runs
AUTO_BRUTE = 7


def comb(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def _srange(lo: int, hi: int) -> range:
    return range(lo, hi + 1)


def decimal(x: Fraction, digits: int = 30) -> str:
    """Render an exact rational with ``digits`` significant digits."""
    from decimal import Context, Decimal

    ctx = Context(prec=digits)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


@dataclass(frozen=True)
class Coefficient:
    kind: str
    params: tuple[tuple[str, int], ...]
    value: Fraction
    source: str

    def to_json_obj(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params),
                "value": str(self.value), "decimal": decimal(self.value),
                "source": self.source}


@dataclass
class RecursionReport:
    theorem: str
    pattern: str
    params: dict
    rows: list[dict]
    sign_convention: str | None = None
    conventions: dict[str, list[dict]] = field(default_factory=dict)
    detected_n0: int | None = None
    skipped: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return bool(self.rows) and all(row["holds"] for row in self.rows)

    def to_json_obj(self) -> dict:
        def enc(rows):
            out = []
            for row in rows:
                rec = {key: (str(val) if isinstance(val, Fraction) else val)
                       for key, val in row.items()}
                if "residual" in row:
                    rec["residual_decimal"] = decimal(row["residual"])
                out.append(rec)
            return out

        obj = {"theorem": self.theorem, "pattern": self.pattern,
               "params": self.params, "rows": enc(self.rows),
               "holds": self.holds}
        if self.conventions:
            obj["conventions"] = {name: enc(rows) for name, rows in self.conventions.items()}
            obj["sign_convention"] = self.sign_convention
        if self.detected_n0 is not None or self.theorem == "nonoverlap-words":
            obj["detected_n0"] = self.detected_n0
        if self.skipped:
            obj["skipped"] = self.skipped
        if self.notes:
            obj["notes"] = self.notes
        return obj


def _rows(residuals: dict[int, Fraction]) -> list[dict]:
    return [{"n": n, "residual": res, "holds": res == 0} for n, res in residuals.items()]


def _all_hold(rows: list[dict]) -> bool:
    return bool(rows) and all(r["holds"] for r in rows)


# non-overlapping chains ---------------------------------------------------

def _require_nonoverlapping(v: Pattern) -> None:
    if v.d < 3 or not is_nonoverlapping(v):
        raise ValueError("pattern not non-overlapping")


def _chain(v: Pattern, k: int) -> tuple[int, list]:
    """Length and constraints of k+1 occurrences chained on single letters."""
    d = v.d
    return (k + 1) * d - k, [(j * (d - 1) + 1, v.entries) for j in range(k + 1)]


def L_oracle(v, k: int, method: str = "auto", cap: int = ORACLE_CAP) -> Coefficient:
    """P(windows starting at 1, d, 2d-1, ..., k(d-1)+1 are all occurrences).

    ``method="brute"`` enumerates S_{(k+1)d-k} and refuses lengths above
    ``cap``; ``"dp"`` uses the window-event DP; ``"auto"`` picks brute when
    it fits.
    """
    v = Pattern.parse(v)
    _require_nonoverlapping(v)
    length, cons = _chain(v, k)
    if method == "brute" or (method == "auto" and length <= min(cap, AUTO_BRUTE)):
        count, src = brute_perm_event(length, cons, cap), "oracle:brute"
    else:
        count, src = perm_event_count(length, cons), "oracle:event-dp"
    return Coefficient("L", (("k", k),), Fraction(count, math.factorial(length)), src)


def _chain_closed_sum(v: Pattern, k: int, x0_hi: int, xlast_hi: int, block) -> int:
    """Shared nested sum over x_0 < x_1 < ... < x_{k+1} with given limits."""
    d, v1, vd = v.d, v.entries[0], v.entries[-1]
    total = 0
    for x0 in _srange(v1, x0_hi):
        for xl in _srange(x0 + (k + 1) * (vd - 1), xlast_hi):
            def inner(i: int, prev: int, xs: list[int]) -> int:
                if i > k:
                    xs = xs + [xl]
                    prod = 1
                    for j in range(1, k + 2):
                        prod *= block(j, xs[j - 1], xs[j])
                        if not prod:
                            break
                    return prod
                acc = 0
                for xi in _srange(prev + vd - v1, xl - (k + 1 - i) * (d - v1)):
                    acc += inner(i + 1, xi, xs + [xi])
                return acc
            total += inner(1, x0, [x0])
    return total


def L_closed(v, k: int) -> Coefficient:
    """The nested-sum formula for L_k, evaluated exactly as printed."""
    v = Pattern.parse(v)
    _require_nonoverlapping(v)
    d, v1, vd = v.d, v.entries[0], v.entries[-1]
    if not v1 < vd:
        raise ValueError("closed form needs v_1 < v_d")

    def block(i, lo, hi):
        return (comb(hi - lo - 1, vd - v1 - 1)
                * comb((i + 1) * d + (k - i) * v1 - k - hi, d - vd - 1)
                * comb(lo - (vd - 1) * i - 1, v1 - 1))

    num = _chain_closed_sum(v, k, (k + 1) * v1 - k, k * (d - 1) + vd, block)
    length = (k + 1) * d - k
    return Coefficient("L", (("k", k),), Fraction(num, math.factorial(length)),
                       "closed_form")


def grade(closed: Iterable[Coefficient], oracle: Iterable[Coefficient]) -> list[dict]:
    """Pair closed-form values with oracle values; the oracle is authoritative."""
    out = []
    for c, o in zip(closed, oracle):
        out.append({"kind": c.kind, "params": dict(c.params), "closed": str(c.value),
                    "oracle": str(o.value), "match": c.value == o.value})
    return out


def grade_L(v, k_max: int = 2) -> list[dict]:
    return grade([L_closed(v, k) for k in range(k_max + 1)],
                 [L_oracle(v, k) for k in range(k_max + 1)])


def verify_nonoverlapping_recursion(v, n_max: int = 20, n_min: int | None = None,
                                    coefficients: str = "oracle",
                                    probs: ProbTable | None = None) -> RecursionReport:
    """Exact residuals of the linear recursion for a non-overlapping pattern.

    Two sign conventions are evaluated for each ``n`` (``m = (n-1)//(d-1)``):

    * ``proof``:   a_n - a_{n-1} + a_{n-d}/d! + sum_j (-1)^j L_j a_{n-jd+j-d}
    * ``printed``: a_n - a_{n-1} - a_{n-d}/d! - sum_j (-1)^j L_j a_{n-jd+j-d}

    ``rows`` holds the ``proof`` residuals, which follow from the
    inclusion-exclusion expansion; ``sign_convention`` names whichever
    convention vanishes at every ``n``.
    """
    v = Pattern.parse(v)
    _require_nonoverlapping(v)
    d = v.d
    n_min = d if n_min is None else n_min
    a = probs or perm_table(v, n_max + d - 1, 0)
    m_top = (n_max - 1) // (d - 1)
    if coefficients == "oracle":
        L = [L_oracle(v, j).value for j in range(m_top + 1)]
    elif coefficients == "closed":
        L = [L_closed(v, j).value for j in range(m_top + 1)]
    else:
        raise ValueError("coefficients must be 'oracle' or 'closed'")
    inv_fact = Fraction(1, math.factorial(d))
    proof, printed = {}, {}
    for n in range(n_min, n_max + 1):
        m = (n - 1) // (d - 1)
        s = sum(((-1) ** j * L[j] * a(n - j * d + j - d) for j in range(1, m + 1)),
                Fraction(0))
        base = a(n) - a(n - 1)
        proof[n] = base + inv_fact * a(n - d) + s
        printed[n] = base - inv_fact * a(n - d) - s
    conv = {"proof": _rows(proof), "printed": _rows(printed)}
    chosen = next((name for name, rows in conv.items() if _all_hold(rows)), None)
    return RecursionReport("nonoverlap-perms", str(v),
                           {"n_min": n_min, "n_max": n_max, "coefficients": coefficients},
                           conv["proof"], chosen, conv)


# words --------------------------------------------------------------------

def _require_word_pre(v: Pattern, k: int) -> None:
    _require_nonoverlapping(v)
    if not v.entries[0] < v.entries[-1]:
        raise ValueError("word recursion needs v_1 < v_d")
    if k < v.d:
        raise ValueError("alphabet smaller than pattern")


def H_oracle(v, k: int, j: int, method: str = "auto", cap: int = 10**6) -> Coefficient:
    """P(j+1 chained occurrences at the prescribed windows) for words over [k]."""
    v = Pattern.parse(v)
    _require_word_pre(v, k)
    length, cons = _chain(v, j)
    if method == "brute" or (method == "auto" and k**length <= min(cap, 5 * 10**4)):
        count, src = brute_word_event(k, length, cons, cap), "oracle:brute"
    else:
        count, src = word_event_count(k, length, cons), "oracle:event-dp"
    return Coefficient("H", (("k", k), ("j", j)), Fraction(count, k**length), src)


def H_closed(v, k: int, j: int) -> Coefficient:
    """The word-chain nested sum, as printed (alphabet ``k``, chain index ``j``)."""
    v = Pattern.parse(v)
    _require_word_pre(v, k)
    d, v1, vd = v.d, v.entries[0], v.entries[-1]

    def block(i, lo, hi):
        return (comb(hi - lo - 1, vd - v1 - 1)
                * comb((k - lo) - (j - i) * (d - v1 - 1) - 1, d - vd - 1)
                * comb(lo - (vd - 1) * i - 1, v1 - 1))

    num = _chain_closed_sum(v, j, (j + 1) * v1 - j, j * (d - 1) + vd, block)
    length = (j + 1) * d - j
    return Coefficient("H", (("k", k), ("j", j)), Fraction(num, k**length), "closed_form")


def grade_H(v, k: int, j_max: int = 2) -> list[dict]:
    return grade([H_closed(v, k, j) for j in range(j_max + 1)],
                 [H_oracle(v, k, j) for j in range(j_max + 1)])


def verify_word_recursion(v, k: int, n_max: int = 14, n_min: int | None = None,
                          probs: ProbTable | None = None) -> RecursionReport:
    """Residuals of the word recursion, summing chain terms j = 1..k.

    ``proof`` uses H_{k,0} = C(k,d)/k^d (the probability of one occurrence)
    and the inclusion-exclusion signs; ``printed`` uses 1/k^d and the
    opposite signs.  ``detected_n0`` is the least ``n0`` from which every
    ``proof`` residual up to ``n_max`` vanishes.
    """
    v = Pattern.parse(v)
    _require_word_pre(v, k)
    d = v.d
    n_min = d if n_min is None else n_min
    h = probs or word_table(v, k, n_max + d - 1, 0)
    H = [H_oracle(v, k, j).value for j in range(k + 1)]
    first = Fraction(1, k**d)
    proof, printed = {}, {}
    for n in range(n_min, n_max + 1):
        s = sum(((-1) ** j * H[j] * h(n - j * d + j - d) for j in range(1, k + 1)),
                Fraction(0))
        base = h(n) - h(n - 1)
        proof[n] = base + H[0] * h(n - d) + s
        printed[n] = base - first * h(n - d) - s
    conv = {"proof": _rows(proof), "printed": _rows(printed)}
    n0 = None
    for n in range(n_max, n_min - 1, -1):
        if proof[n] != 0:
            break
        n0 = n
    chosen = next((name for name, rows in conv.items() if _all_hold(rows)), None)
    return RecursionReport("nonoverlap-words", str(v),
                           {"k": k, "n_min": n_min, "n_max": n_max},
                           conv["proof"], chosen, conv, detected_n0=n0)


# monotone patterns --------------------------------------------------------

def _monotone_event(d: int, k: int, close: bool) -> tuple[int, list]:
    inc = tuple(range(1, d + 1))
    cons = []
    for i in range(k):
        cons.append((i * d + 1, inc))
        cons.append((i * d + d, (2, 1)))
    if close:
        cons.append((k * d + 1, inc))
        return k * d + d, cons
    return k * d + 1, cons


def _event_prob(length: int, cons, method: str, cap: int) -> tuple[Fraction, str]:
    if method == "brute" or (method == "auto" and length <= min(cap, AUTO_BRUTE)):
        count, src = brute_perm_event(length, cons, cap), "oracle:brute"
    else:
        count, src = perm_event_count(length, cons), "oracle:event-dp"
    return Fraction(count, math.factorial(length)), src


def M_oracle(d: int, k: int, method: str = "auto", cap: int = ORACLE_CAP) -> Coefficient:
    """P(k increasing runs of length d, each followed by a descent) on S_{kd+1}."""
    if d < 3 or k < 1:
        raise ValueError("need d >= 3 and k >= 1")
    val, src = _event_prob(*_monotone_event(d, k, False), method, cap)
    return Coefficient("M", (("d", d), ("k", k)), val, src)


def Mtilde_oracle(d: int, m: int, method: str = "auto", cap: int = ORACLE_CAP) -> Coefficient:
    """As :func:`M_oracle` for ``m`` runs, then one more increasing window."""
    if d < 3 or m < 0:
        raise ValueError("need d >= 3 and m >= 0")
    val, src = _event_prob(*_monotone_event(d, m, True), method, cap)
    return Coefficient("Mtilde", (("d", d), ("m", m)), val, src)


def _monotone_nested(d: int, k: int) -> int:
    # y_1 in [d, d+1] weighted C(y_1-1, d-1); then for each further level
    # sum_{x=1}^{y-1} sum_{y'=x+d-2}^{d+1} C(y'-x-1, d-2); finally sum_{x_k} 1
    def level(i: int, y: int) -> int:
        if i == k:
            return len(_srange(1, y - 1))
        acc = 0
        for x in _srange(1, y - 1):
            for y2 in _srange(x + d - 2, d + 1):
                acc += comb(y2 - x - 1, d - 2) * level(i + 1, y2)
        return acc

    return sum(comb(y1 - 1, d - 1) * level(1, y1) for y1 in _srange(d, d + 1))


def M_closed(d: int, k: int) -> Coefficient:
    """The printed formulas for M_k (the k = 1 case has its own display)."""
    if k == 1:
        num = sum((y1 - 1) * comb(y1 - 1, d - 1) for y1 in _srange(d, d + 1))
    else:
        num = _monotone_nested(d, k)
    return Coefficient("M", (("d", d), ("k", k)),
                       Fraction(num, math.factorial(k * d + 1)), "closed_form")


def Mtilde_closed(d: int, m: int) -> Coefficient:
    """The printed formula for the closing term.

    As printed, the innermost ``x_m`` sum is written outside the ``y_m`` sum
    it depends on; it is read with ``y_m`` binding first, which makes the
    numerator coincide with the nested sum used for M_m.
    """
    if m < 1:
        raise ValueError("closed form defined for m >= 1")
    num = _monotone_nested(d, m)
    return Coefficient("Mtilde", (("d", d), ("m", m)),
                       Fraction(num, math.factorial(m * d + 1)), "closed_form")


def grade_M(d: int, k_max: int = 2) -> list[dict]:
    rows = grade([M_closed(d, k) for k in range(1, k_max + 1)],
                 [M_oracle(d, k) for k in range(1, k_max + 1)])
    rows += grade([Mtilde_closed(d, m) for m in range(1, k_max + 1)],
                  [Mtilde_oracle(d, m) for m in range(1, k_max + 1)])
    return rows


def verify_monotone_recursion(v, n_max: int = 20, n_min: int | None = None,
                              probs: ProbTable | None = None) -> RecursionReport:
    """Residuals of the monotone-pattern recursion under three conventions.

    With ``m = (n-1)//d`` and oracle coefficients:

    * ``statement``: a_{n-1} - a_n + sum_k (-1)^k M_k a_{n-kd-1} + Mtilde_m
    * ``proof``:     a_n - a_{n-1} + sum_k (-1)^(k-1) M_k a_{n-kd-1} + (-1)^m Mtilde_m
    * ``corrected``: as ``proof`` but the closing term is Mtilde_m only when
      ``n = md + 1`` and M_{m+1} otherwise (the last expansion step leaves
      the event "m runs, an occurrence, then a descent" when n > md + 1).

    ``sign_convention`` names the one of ``statement``/``proof`` that
    vanishes for every ``n``, or is ``None``.
    """
    v = Pattern.parse(v)
    if v.d < 3 or not is_monotone(v):
        raise ValueError("pattern not monotone")
    d = v.d
    n_min = d + 1 if n_min is None else n_min
    a = probs or perm_table(v, n_max + d - 1, 0)
    m_top = (n_max - 1) // d
    M = {k: M_oracle(d, k).value for k in range(1, m_top + 2)}
    Mt = {m: Mtilde_oracle(d, m).value for m in range(0, m_top + 1)}
    conv: dict[str, dict[int, Fraction]] = {"statement": {}, "proof": {}, "corrected": {}}
    for n in range(n_min, n_max + 1):
        m = (n - 1) // d
        s_stmt = sum(((-1) ** k * M[k] * a(n - k * d - 1) for k in range(1, m + 1)), Fraction(0))
        s_proof = sum(((-1) ** (k - 1) * M[k] * a(n - k * d - 1) for k in range(1, m + 1)),
                      Fraction(0))
        conv["statement"][n] = a(n - 1) - a(n) + s_stmt + Mt[m]
        conv["proof"][n] = a(n) - a(n - 1) + s_proof + (-1) ** m * Mt[m]
        tail = Mt[m] if n == m * d + 1 else M[m + 1]
        conv["corrected"][n] = a(n) - a(n - 1) + s_proof + (-1) ** m * tail
    rows = {name: _rows(res) for name, res in conv.items()}
    chosen = next((name for name in ("statement", "proof") if _all_hold(rows[name])), None)
    report = RecursionReport("monotone", str(v), {"n_min": n_min, "n_max": n_max},
                             rows["proof"], chosen, rows)
    if chosen is None:
        bad = [r["n"] for r in rows["proof"] if not r["holds"]]
        report.notes.append(
            f"neither printed convention vanishes for all n; proof convention fails at n={bad}")
        report.notes.append(
            "corrected convention holds: " + str(_all_hold(rows["corrected"])))
    return report


# sandwich inequality ------------------------------------------------------

def beta(v, ell: int, probs: ProbTable | None = None) -> Fraction:
    """a_{ell-1}^(1)(v) - a_ell^(1)(v)."""
    v = Pattern.parse(v)
    if ell < 2:
        raise ValueError("ell must be >= 2")
    a = probs or perm_table(v, ell + v.d - 1, 0)
    return a(ell - 1) - a(ell)


def beta_w(v, k: int, ell: int, probs: ProbTable | None = None) -> Fraction:
    """h_{k,ell-1}^(1)(v) - h_{k,ell}^(1)(v)."""
    v = Pattern.parse(v)
    if ell < 2:
        raise ValueError("ell must be >= 2")
    h = probs or word_table(v, k, ell + v.d - 1, 0)
    return h(ell - 1) - h(ell)


def verify_sandwich(v, ell: int, n_max: int = 20, universe: str = "perms",
                    k: int | None = None, n_min: int | None = None) -> RecursionReport:
    """Check 0 <= a_n - a_{n-1} + beta a_{n-ell-d+1} <= c a_{n-ell-2d+2} exactly.

    ``c`` is (d-1)/d! for permutations and (d-1)/k^d for words.  Values of
    ``n`` at or below ``ell + 2d`` are skipped and listed in ``skipped``.
    """
    v = Pattern.parse(v)
    d = v.d
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if universe == "perms":
        a = perm_table(v, n_max + d - 1, 0)
        c = Fraction(d - 1, math.factorial(d))
    elif universe == "words":
        if k is None:
            raise ValueError("word sandwich needs k")
        a = word_table(v, k, n_max + d - 1, 0)
        c = Fraction(d - 1, k**d)
    else:
        raise ValueError(f"unknown universe {universe!r}")
    b = a(ell - 1) - a(ell)
    lo = ell + 2 * d + 1
    n_min = lo if n_min is None else n_min
    rows, skipped = [], []
    for n in range(n_min, n_max + 1):
        if n < lo:
            skipped.append(n)
            continue
        mid = a(n) - a(n - 1) + b * a(n - ell - d + 1)
        upper = c * a(n - ell - 2 * d + 2)
        rows.append({"n": n, "middle": mid, "upper": upper,
                     "holds": 0 <= mid <= upper})
    params = {"ell": ell, "universe": universe, "n_max": n_max, "beta": str(b)}
    if k is not None:
        params["k"] = k
    return RecursionReport("sandwich", str(v), params, rows, skipped=skipped)
