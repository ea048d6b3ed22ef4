"""Steady-state polynomials of a small binding/release network.

A substrate X1 binds an enzyme X3 to form the complex X4, which either falls
apart again or releases the product X2.
"""

# %%
from crnlift import networks
from crnlift.network import stoichiometric_basis, steady_state_ideal, steady_state_polynomials

N = networks.load("binding_release")
print(N.render())

# %% [markdown]
# One polynomial per species: the net production rate under mass action.

# %%
for name, f in zip(N.species_names, steady_state_polynomials(N)):
    print(f"F[{name}] = {f}")

# %% [markdown]
# Only dim(S) of them are needed; the rest are rational combinations.

# %%
s, rows = stoichiometric_basis(N)
print("dim S =", s, "using species", [N.species_names[i] for i in rows])
print("generators:", [str(f) for f in steady_state_ideal(N, minimal=True)])
