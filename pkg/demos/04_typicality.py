"""
How common are perfect MMES graphs?
===================================

Draw random symmetric integer matrices with weights in [-N, N] and count
how many pass the exact rank test.
"""

# %%
from cvteamwork import mmes

for n in range(4, 11):
    res = mmes.typicality_scan(n, trials=100, seed=2024)
    print(f"N={n:2d}  pass fraction {res.pass_fraction:.2f}")

# %%
# Failures at small N come from blocks that happen to be singular.
res = mmes.typicality_scan(4, trials=20, seed=2024)
for w in res.witnesses[:5]:
    print(w)
