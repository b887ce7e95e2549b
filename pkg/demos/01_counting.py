"""Counting consecutive occurrences and grouping patterns by their counts.

Run with ``python demos/01_counting.py``.  Each ``# %%`` block can also be
run as a cell in an editor that understands the marker.
"""
# %%
from conseq_lab import Pattern, count_consecutive, overlap_set
from conseq_lab.enumeration import brute_table, dp_perm_counts, dp_word_counts, perm_table

v = Pattern.parse("132")
print("occurrences of 132 in 13254:", count_consecutive(v, (1, 3, 2, 5, 4)))
print("overlap set of 132:", sorted(overlap_set(v)), " of 123:", sorted(overlap_set("123")))

# %% The DP and the enumeration oracle agree row for row.
dp = dp_perm_counts("132", 8, 2)
oracle = brute_table("132", "perms", 8, 2)
print("DP equals enumeration up to n = 8:", dp.rows == oracle.rows)
for n in range(3, 9):
    print(f"  n={n}: avoiders={dp.count(n, 0):6d}  one occurrence={dp.count(n, 1):6d}")

# %% Words over a k-letter alphabet work the same way.
words = dp_word_counts("132", 4, 6, 1)
print("words over [4] of length 6 avoiding 132:", words.count(6, 0), "of", 4**6)

# %% Avoidance probabilities are exact fractions.
a = perm_table("132", 12, 0)
for n in (1, 5, 10):
    print(f"a_{n}(132) = {a(n)} ~ {float(a(n)):.6f}")

# %% Candidate classes for length 3 and 4.
from conseq_lab.wilf import classify, converse_candidates

for d in (3, 4):
    part = classify(d, "perms", 8, 0)
    print(part.label)
    for block in part.blocks:
        print("   ", " ".join(str(p) for p in block))
print("pairs sharing a block but not linked by known rules (d=4):", converse_candidates(4))
