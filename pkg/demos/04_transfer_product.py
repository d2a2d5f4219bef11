# %% [markdown]
# # The bigraded algebra of GL_n cohomology
#
# Classes in H^t(GL_n) and H^s(GL_m) multiply to H^{t+s}(GL_{n+m}) by
# a cross product, restriction to the block subgroup, and transfer.  A
# restriction-then-transfer map d lowers n by one.

# %%
from qdivided.gcoh import EAlgebra, verify_free_D, verify_leibniz
from qdivided.gcoh.ealg import commutativity_report, transfer_product, unit_constants

E = EAlgebra("GL", 3, 3, 3, 2)  # ell = 3, q = 2, t <= 3, n <= 3
for t in range(4):
    print("t =", t, [E.dim(t, n) for n in range(1, 4)])

# %% [markdown]
# In degree t = 0 the units multiply like divided powers.

# %%
for u in unit_constants(E, 3):
    print(u)
print(transfer_product(E, [1], 0, 1, [1], 0, 2))

# %% [markdown]
# d is a q-derivation, and each row E^t is a free module over the
# divided powers with generators in low degree.

# %%
rep = verify_leibniz(E)
print(rep["pairs_checked"], "products checked, violations:", rep["violations"])
for t in range(4):
    print(t, verify_free_D(E, t)["kernel_support"])

# %% [markdown]
# The same product is graded-commutative in the ordinary sign sense.

# %%
print(commutativity_report(E)["graded_failures"])
