"""
Channel squeezing and K-mode fidelity
=====================================

For a graph state the reduced spectrum across a cut follows
nu_j^2 = 1 + alpha_j e^{4r}, where alpha_j are the squared singular values
of the block W_AB.  A GHZ-type K-mode input then sees the product of its
per-mode teleportation fidelities.
"""

# %%
import numpy as np

from cvteamwork import circuits, graphs, mmes, teamwork
from cvteamwork.mmes import Bipartition

omega = graphs.twenty_mode_fixture()
cut = Bipartition((2, 6, 10), 20)
fit = mmes.scaling_fit(omega, cut, (1.0, 1.5))
sv = np.linalg.svd(omega.to_numpy()[np.ix_(cut.block_a, cut.block_b)], compute_uv=False)
print("fitted alpha ", np.round(fit.alphas, 6))
print("singular^2   ", np.round(sv**2, 6))
print("predicted r_j at r=2:", fit.predict_squeezings(2.0))

# %%
for k in range(1, 6):
    cov = circuits.ghz_input_cm(k, 0.5)
    f, _ = teamwork.teleport_fidelity(cov, mmes.ChannelSpec((1.0,) * k))
    lo, hi = teamwork.fk_bounds(k, 1.0, 0.5)
    print(f"K={k}  {lo:.4f} <= {f:.4f} <= {hi:.4f}")

# %%
# Teleporting a 3-mode GHZ input across the cut of the 20-mode state.
report = teamwork.teamwork_fidelity(omega, cut, circuits.ghz_input_cm(3, 0.5), r=1.0)
print(report.to_dict())
