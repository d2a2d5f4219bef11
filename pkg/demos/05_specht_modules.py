# %% [markdown]
# # Unipotent Specht modules
#
# P_mu is spanned by flags of type mu in F_q^d.  The Specht module M_mu is
# the common kernel of the maps psi that move one subspace of a flag.

# %%
from qdivided.spechtlab import (flag_count, psi_map, specht_dim, specht_cohomology_series,
                                fit_dimension_polynomial)

print(flag_count((1, 1, 1), 2), "complete flags in F_2^3")
print(psi_map((1, 1), 1, 2, 2, 3))

for mu in [(3,), (2, 1), (1, 1, 1)]:
    print(mu, [specht_dim(mu, q, ell) for q, ell in [(2, 3), (2, 5), (3, 2)]])

# %% [markdown]
# For a fixed tail mu, dim M_{mu[n]} is a polynomial in q^n whose degree
# is |mu|.

# %%
series = [(n, specht_dim((n - 1, 1), 2, 3)) for n in range(2, 8)]
print(series)
fit = fit_dimension_polynomial(series, 2)
print(fit.to_json())

# %% [markdown]
# Cohomology of the Specht modules along n, next to the predicted period.

# %%
print(specht_cohomology_series((1,), 1, range(1, 4), 2, 3))
