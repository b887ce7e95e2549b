from fractions import Fraction

import numpy as np
import pytest

from conseq_lab.correlation import (alpha_correlation, bareiss_det, build_R, build_R_modified,
                                    expected_alpha_T1, expected_alpha_Tr, genfunc_value,
                                    independence_check, instances, matches_nonoverlap_form,
                                    required_terms, verify_T1_system)
from conseq_lab.core import reduce


def solve(A, b):
    """Plain Fraction Gauss-Jordan, independent of the package."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


def automaton_Tr(v, k, alpha, r_max, t=()):
    """E[alpha^{T^(r)}] by first-step analysis on the last d-1 letters."""
    d = len(v)
    states = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for s in frontier:
            for x in range(1, k + 1):
                s2 = (s + (x,))[-(d - 1):]
                if s2 not in states:
                    states.append(s2)
                    nxt.append(s2)
        frontier = nxt
    pos = {s: i for i, s in enumerate(states)}

    def hit(s, x):
        w = s + (x,)
        return len(w) == d and len(set(w)) == d and reduce(w) == tuple(v)

    prev = None
    out = []
    for r in range(1, r_max + 1):
        n = len(states)
        A = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        b = [Fraction(0)] * n
        for s in states:
            i = pos[s]
            for x in range(1, k + 1):
                s2 = (s + (x,))[-(d - 1):]
                if hit(s, x):
                    b[i] += alpha / k * (1 if r == 1 else prev[pos[s2]])
                else:
                    A[i][pos[s2]] -= alpha / k
        prev = solve(A, b)
        start = tuple(t)[-(d - 1):] if t else ()
        out.append(prev[pos[start]])
    return out


def test_instances_are_sorted_reductions():
    inst = instances("132", 4)
    assert [str(w) for w in inst.instances] == ["132", "142", "143", "243"]
    assert len(instances("1342", 6)) == 15
    with pytest.raises(ValueError):
        instances("132", 2)


def test_correlation_matrix_entries():
    R = build_R("132", 4, Fraction(1, 2))
    assert all(R.entries[i][i] == 512 for i in range(4))
    assert alpha_correlation("132", "243", Fraction(1, 2), 4) == 8
    assert alpha_correlation("143", "243", Fraction(1, 2), 4) == 0
    assert matches_nonoverlap_form("132", 5, Fraction(1, 3))
    Ru = build_R_modified(R, "row_u", (1, 4, 2))
    assert Ru.entries[R.pos("142")] == [1, 1, 1, 1]
    both = build_R_modified(R, "both", "142", "243", "213")
    assert both.entries[R.pos("142")] == [1, 1, 1, 1]
    assert both.entries[R.pos("243")] == build_R_modified(R, "col_u_t", "243", t="213").entries[
        R.pos("243")]


def test_bareiss_agrees_with_numpy():
    rng = np.random.default_rng(0)
    for n in range(1, 7):
        m = rng.integers(-5, 6, size=(n, n))
        assert float(bareiss_det(m.tolist())) == pytest.approx(np.linalg.det(m), abs=1e-6)
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert bareiss_det([[Fraction(1, 2), 0], [0, Fraction(2, 3)]]) == Fraction(1, 3)


@pytest.mark.parametrize("v,k", [("12", 2), ("132", 4), ("123", 3), ("2143", 4)])
@pytest.mark.parametrize("alpha", [Fraction(1, 3), Fraction(1, 2)])
def test_T1_against_automaton(v, k, alpha):
    pat = tuple(int(c) for c in v)
    assert expected_alpha_T1(v, k, alpha) == automaton_Tr(pat, k, alpha, 1)[0]
    assert verify_T1_system(v, k, alpha).holds


def test_known_value():
    assert expected_alpha_T1("132", 4, Fraction(1, 2)) == Fraction(127, 8319)


@pytest.mark.parametrize("t", ["142", "213", "444"])
def test_T1_with_history(t):
    alpha = Fraction(1, 2)
    want = automaton_Tr((1, 3, 2), 4, alpha, 1, tuple(int(c) for c in t))[0]
    assert expected_alpha_T1("132", 4, alpha, t) == want
    assert verify_T1_system("132", 4, alpha, t).holds


def test_short_history_rejected():
    with pytest.raises(ValueError, match="length mismatch"):
        expected_alpha_T1("132", 4, Fraction(1, 2), "12")


def test_Tr_against_automaton():
    assert [expected_alpha_Tr("12", 2, Fraction(1, 2), r) for r in (1, 2, 3)] == [
        Fraction(1, 9), Fraction(1, 81), Fraction(1, 729)]
    want = automaton_Tr((1, 3, 2), 4, Fraction(1, 3), 3)
    assert [expected_alpha_Tr("132", 4, Fraction(1, 3), r) for r in (1, 2, 3)] == want


def test_generating_function_and_independence():
    a = Fraction(1, 2)
    N = required_terms(a, Fraction(1, 10**12))
    for r in (0, 1, 2):
        assert genfunc_value("132", 4, a, r, N).agrees
    assert independence_check("132", 4, a, N)["agrees"]
    with pytest.raises(ValueError, match="truncation"):
        genfunc_value("132", 4, a, 0, 5, tol=Fraction(1, 10**6))
    with pytest.raises(ValueError):
        expected_alpha_T1("132", 4, 1)
