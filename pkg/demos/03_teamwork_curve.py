"""
Teamwork fidelity of the four-mode beam-splitter resource
=========================================================

Two two-mode squeezed pairs are mixed on a beam splitter.  Whichever
two parties form the sending team, local operations turn the state into
two entangled pairs, and a two-mode squeezed input is teleported mode by
mode.
"""

# %%
import numpy as np

from cvteamwork import circuits, teamwork
from cvteamwork.mmes import Bipartition

r, t = 1.0, 1 / 3
cov = circuits.psi4(r, t)
for split in [(0, 3), (0, 1), (0, 2)]:
    red = circuits.psi4_local_reduction(cov, Bipartition(split, 4))
    print([m + 1 for m in split], "pairs", red.pairs, "r_eff", round(red.r_eff, 6), "residual", red.residual)

# %%
# The three curves for a z = 2 input.
rows = teamwork.fidelity_curve(t, 2.0, np.linspace(0, 4, 9))
print(" r     F_14    F_12    F_13")
for row in rows:
    print("  ".join(f"{v:.4f}" for v in row))

# %%
# Write the full table for plotting elsewhere.
teamwork.write_curve_csv(teamwork.fidelity_curve(t, 2.0, np.linspace(0, 3, 100)), "teamwork_curve.csv")
