"""Growth-rate estimates, their polynomial bounds, and waiting-time transforms."""
# %%
import math
from fractions import Fraction

from conseq_lab.growth import bound_report, rho_estimate

est = rho_estimate("123")
print(f"rho(123) ~ {est.value:.12f}; known value 3*sqrt(3)/(2*pi) = "
      f"{3 * math.sqrt(3) / (2 * math.pi):.12f}")

# %% Each bound is reported next to the estimate; violations are listed, not hidden.
for v in ("123", "132"):
    rep = bound_report(v, ell=4)
    print(f"{v}: rho ~ {rep.rho.value:.6f}")
    for b in rep.bounds:
        print(f"   {b['source']:7s} {b['kind']:5s} {b['value']:.6f}")
    print("   flags:", rep.flags, " violations:", [b["source"] for b in rep.violations()])

# %% Correlation matrix of the instances of 132 over a 4-letter alphabet.
from conseq_lab.correlation import build_R, expected_alpha_T1, expected_alpha_Tr, genfunc_value

alpha = Fraction(1, 2)
R = build_R("132", 4, alpha)
for w, row in zip(R.index, R.entries):
    print("".join(map(str, w)), [str(x) for x in row])
print("E[alpha^T] =", expected_alpha_T1("132", 4, alpha))
print("E[alpha^T(2)] =", expected_alpha_Tr("132", 4, alpha, 2))

# %% The determinant formula matches the truncated count series.
g = genfunc_value("132", 4, alpha, 0, 60)
print(f"W_0 = {float(g.value):.15f}; series {float(g.series):.15f}; agrees: {g.agrees}")
