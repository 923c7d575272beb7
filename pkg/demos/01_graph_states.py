"""
Weighted graph states from a circuit and from the closed form
=============================================================

A graph state starts as momentum-squeezed vacua; each weighted edge then
applies a C_Z gate that kicks one momentum by the other mode's position.
"""

# %%
import numpy as np

from cvteamwork import circuits, graphs
from cvteamwork import symplectic as sp

omega = graphs.toeplitz_family(6)
print(graphs.format_adjacency(omega))

# %%
# Build the covariance matrix both ways and compare.
r = 1.0
closed = graphs.graph_state_cm(omega, r)
built = circuits.graph_state_circuit(omega, r)
print("largest entry      ", np.max(np.abs(closed)))
print("circuit vs formula ", np.max(np.abs(built - closed)))

# %%
# Every nullifier p_a - sum_b W_ab x_b carries the squeezed variance e^{-2r}.
for a in range(omega.n):
    v = sp.variance_of_linear_combination(closed, graphs.nullifier(omega, a))
    print(f"mode {a + 1}: {v:.12f}  (e^-2r = {np.exp(-2 * r):.12f})")

# %%
# The global state is pure; a reduced block is mixed.
print("global nu:", np.round(sp.symplectic_eigenvalues(closed), 10))
print("modes 1,2:", sp.symplectic_eigenvalues(sp.reduce(closed, [0, 1])))
