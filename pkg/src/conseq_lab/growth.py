"""Growth-rate estimates and bounds for consecutive-pattern avoidance.

``rho_v = lim a_n^{1/n}`` where ``a_n`` is the probability that a uniform
permutation of length ``n+d-1`` avoids ``v``.  Estimates come from the
ratio sequence ``a_{n+1}/a_n`` with Aitken acceleration.  The bounds are:

* the block bound ``(g_0(S_{alpha d}) / (alpha d)!)^{1/(alpha d)}``,
* the dominant roots of the two characteristic polynomials built from
  ``beta = a_{l-1} - a_l``,
* a Rouche-circle certificate ``delta`` for the smaller of those roots.

Counts and ``beta`` are exact; floats enter only at root finding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import Pattern, all_patterns, reverse
from .enumeration import ProbTable, perm_table

ROOT_TOL = 1e-14
ROOT_MAXITER = 10_000
AITKEN_WINDOW = 5


def _probs(v: Pattern, n_max: int) -> ProbTable:
    """a_n for n <= n_max (permutations up to length n_max + d - 1)."""
    return perm_table(v, n_max + v.d - 1, 0)


# estimates ----------------------------------------------------------------

@dataclass
class RhoEstimate:
    pattern: str
    value: float
    raw: float
    spread: float
    method: str
    n_max: int

    def to_json_obj(self) -> dict:
        return {"value": self.value, "raw": self.raw, "spread": self.spread,
                "method": self.method, "n_max": self.n_max}


def aitken(seq) -> list[float]:
    """Aitken's delta-squared transform; terms with a vanishing denominator pass through."""
    out = []
    for x0, x1, x2 in zip(seq, seq[1:], seq[2:]):
        den = (x2 - x1) - (x1 - x0)
        out.append(x2 if den == 0 else x2 - (x2 - x1) ** 2 / den)
    return out


def rho_estimate(v, n_max: int = 40) -> RhoEstimate:
    """Aitken-accelerated limit of a_{n+1}/a_n over the last five ratios.

    ``value`` is the last accelerated term, ``raw`` the last plain ratio and
    ``spread`` the range of the accelerated terms (a convergence gauge).
    """
    v = Pattern.parse(v)
    d = v.d
    if n_max < d + 2:
        raise ValueError(f"n_max must be at least d+2 = {d + 2}")
    if d == 2:
        # only the monotone permutation avoids 12 (or 21): a_n = 1/(n+1)!
        raw = 1.0 / (n_max + 2)
        return RhoEstimate(str(v), 0.0, raw, raw, "exact (d=2)", n_max)
    a = _probs(v, n_max + 1)
    ratios = [float(a(n + 1) / a(n)) for n in range(n_max + 1 - AITKEN_WINDOW, n_max + 1)]
    acc = aitken(ratios)
    return RhoEstimate(str(v), acc[-1], ratios[-1], max(acc) - min(acc),
                       f"aitken over last {AITKEN_WINDOW} ratios", n_max)


# block bound --------------------------------------------------------------

@dataclass
class MineqReport:
    pattern: str
    alpha: int
    rows: list[dict]

    @property
    def holds(self) -> bool:
        return all(r["holds"] for r in self.rows)


def verify_mineq(v, alpha: int = 2, k_range=range(1, 5)) -> MineqReport:
    """|a_{alpha k d} - a_lam^k| <= (k+2) a_lam^(k-1), lam = 1 + d(alpha-1), exactly."""
    v = Pattern.parse(v)
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    d = v.d
    ks = list(k_range)
    lam = 1 + d * (alpha - 1)
    a = _probs(v, max(alpha * max(ks) * d, lam))
    rows = []
    for k in ks:
        lhs = abs(a(alpha * k * d) - a(lam) ** k)
        rhs = (k + 2) * a(lam) ** (k - 1)
        rows.append({"k": k, "lhs": lhs, "rhs": rhs, "holds": lhs <= rhs})
    return MineqReport(str(v), alpha, rows)


def upper_bound_block(v, alpha: int = 2) -> float:
    """(g_0(S_{alpha d}) / (alpha d)!)^{1/(alpha d)}."""
    v = Pattern.parse(v)
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    d = v.d
    p = _probs(v, alpha * d - d + 1)(alpha * d - d + 1)
    # the fraction can be tiny; take the log exactly enough via numerator/denominator
    return math.exp((math.log(p.numerator) - math.log(p.denominator)) / (alpha * d))


# roots --------------------------------------------------------------------

def durand_kerner(coeffs, tol: float = ROOT_TOL, maxiter: int = ROOT_MAXITER) -> np.ndarray:
    """All roots of the polynomial with coefficients ``coeffs`` (highest first)."""
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[0]
    n = len(c) - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    radius = 1 + max(abs(c[1:]))
    z = radius * (0.4 + 0.9j) ** np.arange(n)
    for _ in range(maxiter):
        pz = np.polyval(c, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1)
        step = pz / diff.prod(axis=1)
        z = z - step
        if np.max(np.abs(step)) < tol:
            break
    return z


def _polish_real(coeffs, x: float, lo: float | None = None, hi: float | None = None) -> float:
    f = np.poly1d(coeffs)
    if lo is not None and hi is not None and f(lo) * f(hi) < 0:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if f(lo) * f(mid) <= 0:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)
    df = f.deriv()
    for _ in range(50):
        step = f(x) / df(x) if df(x) != 0 else 0.0
        x -= step
        if abs(step) < 1e-16:
            break
    return x


@dataclass
class DominantRoot:
    value: complex
    modulus: float
    real: bool
    residual: float
    degree: int

    def to_json_obj(self) -> dict:
        return {"modulus": self.modulus, "real": self.real,
                "re": self.value.real, "im": self.value.imag,
                "residual": self.residual, "degree": self.degree}


def dominant_root(coeffs, bracket: tuple[float, float] | None = None) -> DominantRoot:
    """Largest-modulus root; polished by bisection/Newton when it is real."""
    roots = durand_kerner(coeffs)
    z = roots[np.argmax(np.abs(roots))]
    scale = max(1.0, abs(z))
    real = abs(z.imag) <= 1e-9 * scale
    if real:
        lo, hi = bracket if bracket else (None, None)
        z = complex(_polish_real(coeffs, z.real, lo, hi), 0.0)
    residual = float(abs(np.polyval(np.asarray(coeffs, dtype=complex), z)))
    return DominantRoot(z, float(abs(z)), bool(real), residual, len(coeffs) - 1)


def critical_beta(m: int) -> Fraction:
    return Fraction((m - 1) ** (m - 1), m**m)


def beta_value(v, ell: int) -> Fraction:
    v = Pattern.parse(v)
    if ell < 2:
        raise ValueError("ell must be >= 2")
    a = _probs(v, ell)
    return a(ell - 1) - a(ell)


def poly1_coeffs(beta: float, m: int) -> list[float]:
    """rho^m - rho^(m-1) + beta."""
    c = [0.0] * (m + 1)
    c[0], c[1], c[-1] = 1.0, -1.0, float(beta)
    return c


def poly2_coeffs(beta: float, ell: int, d: int) -> list[float]:
    """rho^(l+2d-2) - rho^(l+2d-3) + beta rho^(d-1) - (d-1)/d!."""
    deg = ell + 2 * d - 2
    c = [0.0] * (deg + 1)
    c[0], c[1] = 1.0, -1.0
    c[deg - (d - 1)] += float(beta)
    c[-1] -= (d - 1) / math.factorial(d)
    return c


@dataclass
class PolyBounds:
    pattern: str
    ell: int
    beta: Fraction
    critical: Fraction
    lower: DominantRoot
    upper: DominantRoot

    @property
    def rho_l(self) -> float:
        return self.lower.modulus

    @property
    def rho_u(self) -> float:
        return self.upper.modulus


def poly_bounds(v, ell: int) -> PolyBounds:
    """Dominant roots of the two characteristic polynomials at level ``ell``.

    A complex dominant root is reported with ``real=False`` and its modulus
    used as the bound value.  For poly1 this happens exactly when beta
    exceeds (m-1)^(m-1)/m^m: then rho^(m-1)(1-rho) < beta on (0,1) and no
    positive root exists.
    """
    v = Pattern.parse(v)
    d = v.d
    beta = beta_value(v, ell)
    m = d + ell - 1
    crit = critical_beta(m)
    if beta == crit:
        raise ValueError("degenerate β, choose different ℓ")
    bracket = ((m - 1) / m, 1.0) if beta < crit else None
    lower = dominant_root(poly1_coeffs(beta, m), bracket)
    upper = dominant_root(poly2_coeffs(beta, ell, d))
    return PolyBounds(str(v), ell, beta, crit, lower, upper)


@dataclass
class Certificate:
    delta: float
    gamma: float | None
    alpha: float
    bound: float

    def to_json_obj(self) -> dict:
        return {"delta": self.delta, "gamma": self.gamma, "alpha_prime": self.alpha,
                "bound": self.bound}


class NoCertificate(ValueError):
    pass


def lower_bound_closed(v, ell: int, grid: int = 400) -> Certificate:
    """Scan alpha' on a geometric grid for the Rouche circle radius.

    With delta = beta^{1/((m-1)(1+alpha'))}, the circle |x| = delta works
    when 1 < (1 - delta) beta^{-alpha'/(1+alpha')}.  The largest feasible
    delta is returned, with gamma solving 1 - beta - beta^gamma = delta
    (``None`` when 1 - beta - delta <= 0, where any gamma works).
    """
    v = Pattern.parse(v)
    d = v.d
    beta = float(beta_value(v, ell))
    m = d + ell - 1
    if not 0 < beta < 1:
        raise NoCertificate("no certificate found")
    best = None
    for ap in np.geomspace(1e-4, 1e4, grid):
        delta = beta ** (1.0 / ((m - 1) * (1 + ap)))
        if (1 - delta) * beta ** (-ap / (1 + ap)) > 1 and (best is None or delta > best[0]):
            best = (delta, float(ap))
    if best is None:
        raise NoCertificate("no certificate found")
    delta, ap = best
    gap = 1 - beta - delta
    gamma = math.log(gap) / math.log(beta) if gap > 0 else None
    return Certificate(float(delta), gamma, ap, float(delta))


# reports ------------------------------------------------------------------

@dataclass
class BoundReport:
    pattern: str
    rho: RhoEstimate
    bounds: list[dict] = field(default_factory=list)
    residuals: dict = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    def violations(self, tol: float = 1e-6) -> list[dict]:
        out = []
        for b in self.bounds:
            if b["kind"] == "lower" and b["value"] > self.rho.value + tol:
                out.append(b)
            if b["kind"] == "upper" and b["value"] < self.rho.value - tol:
                out.append(b)
        return out

    def to_json_obj(self) -> dict:
        return {"pattern": self.pattern, "rho_estimate": self.rho.to_json_obj(),
                "bounds": self.bounds, "residuals": self.residuals, "flags": self.flags,
                "violations": [b["source"] for b in self.violations()]}


def bound_report(v, ell: int = 4, alphas=(2, 3), n_max: int = 40) -> BoundReport:
    v = Pattern.parse(v)
    rep = BoundReport(str(v), rho_estimate(v, n_max))
    for al in alphas:
        rep.bounds.append({"source": "block", "kind": "upper",
                           "value": upper_bound_block(v, al), "params": {"alpha": al}})
    if v.d >= 3:
        pb = poly_bounds(v, ell)
        params = {"ell": ell, "beta": str(pb.beta), "critical_beta": str(pb.critical)}
        rep.bounds.append({"source": "poly1", "kind": "lower", "value": pb.rho_l,
                           "params": params, "real": pb.lower.real})
        rep.bounds.append({"source": "poly2", "kind": "upper", "value": pb.rho_u,
                           "params": params, "real": pb.upper.real})
        rep.residuals = {"poly1": pb.lower.residual, "poly2": pb.upper.residual}
        if not pb.lower.real:
            rep.flags.append("poly1 dominant root is complex (beta above critical value)")
        if not pb.upper.real:
            rep.flags.append("poly2 dominant root is complex")
        try:
            cert = lower_bound_closed(v, ell)
            rep.bounds.append({"source": "rouche", "kind": "lower", "value": cert.delta,
                               "params": cert.to_json_obj()})
            if cert.delta > pb.rho_l:
                rep.flags.append("certificate delta exceeds rho_l")
        except NoCertificate:
            rep.flags.append("no certificate found")
    return rep


def extremal_ordering(d: int, n_max: int | None = None, tol: float = 1e-6) -> dict:
    """Estimates for all of S_d against the expected extremes.

    The smallest growth rate should belong to 1..(d-2) d (d-1) and the
    largest to the identity; ties within ``tol`` are accepted.
    """
    if d not in (3, 4):
        raise ValueError("d must be 3 or 4")
    n_max = n_max or (40 if d == 3 else 32)
    est = {}
    for v in all_patterns(d):
        key = min(v, reverse(v))
        if key not in est:
            est[key] = rho_estimate(key, n_max).value
        est[v] = est[key]
    lo = Pattern(tuple(range(1, d - 1)) + (d, d - 1))
    hi = Pattern(tuple(range(1, d + 1)))
    ok = all(est[lo] - tol <= x <= est[hi] + tol for x in est.values())
    return {"d": d, "n_max": n_max, "estimates": {str(v): x for v, x in sorted(est.items())},
            "min_pattern": str(lo), "max_pattern": str(hi), "ordering_holds": ok,
            "min_rho": min(est.values())}
