"""Exact recursion residuals for non-overlapping and monotone patterns."""
# %%
from conseq_lab.recursion import (L_closed, L_oracle, M_oracle, Mtilde_oracle,
                                  verify_monotone_recursion, verify_nonoverlapping_recursion,
                                  verify_word_recursion)

# %% Chain coefficients come from an oracle; the nested-sum formula is graded against it.
for k in range(3):
    print(f"L_{k}(132): oracle {L_oracle('132', k).value}  closed form {L_closed('132', k).value}")

# %% With oracle coefficients the recursion for 132 leaves no residual.
rep = verify_nonoverlapping_recursion("132", 20)
print("132 recursion holds:", rep.holds, "under the", rep.sign_convention, "convention")

# %% The word analogue is checked from the first n where every residual vanishes.
for k in (3, 4, 5):
    print(f"k={k}: residuals vanish from n = {verify_word_recursion('132', k, 14).detected_n0}")

# %% Monotone patterns: the printed conventions leave residuals; the corrected tail does not.
print("M_1, M_2:", M_oracle(3, 1).value, M_oracle(3, 2).value)
print("Mtilde_1, Mtilde_2:", Mtilde_oracle(3, 1).value, Mtilde_oracle(3, 2).value)
mono = verify_monotone_recursion("123", 16)
for name, rows in mono.conventions.items():
    bad = [r["n"] for r in rows if not r["holds"]]
    print(f"  {name:9s}: nonzero residual at n = {bad}")
