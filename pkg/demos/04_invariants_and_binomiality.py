"""Steady-state invariants and binomiality for a two-site phosphorylation cycle."""

# %%
from crnlift import networks
from crnlift.groebner import buchberger, grevlex
from crnlift.independence import check_independence
from crnlift.lift import binomiality, core_invariants, invariants
from crnlift.network import steady_state_ideal
from crnlift.reduction import reduce_network

N = networks.load("mapk", rate_prefix="kappa")
R = reduce_network(N, N.intermediates_hint)
check_independence(R)

# %% [markdown]
# Eliminate everything except the kinase and the three substrate forms.  The
# invariant is computed on the core and mapped back with phi.

# %%
keep = ["e", "x0", "x1", "x2"]
print("core:", core_invariants(R, keep)[0])
print("extended:", invariants(R, keep)[0])

# %% [markdown]
# The core ideal is binomial, but two intermediates have two inputs each and
# one of them leaves a two-term remainder.

# %%
v = binomiality(R)
print("core binomial:", v.core_binomial, "verdict:", v.verdict)
print("remainder terms:", v.remainder_terms)
print("witness:", v.witness[0], v.witness[1])

# %% [markdown]
# An enzyme can break binomiality too: adding E to one reaction of a binomial
# network changes the reduced basis.

# %%
for name in ("autocatalysis", "autocatalysis_enzyme"):
    M = networks.load(name, rate_prefix="kappa")
    G = buchberger(steady_state_ideal(M), grevlex(M.variables))
    print(name, G.strings())
