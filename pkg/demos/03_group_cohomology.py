# %% [markdown]
# # Cohomology of small finite groups
#
# Groups are permutation groups.  Cohomology with F_ell coefficients is
# computed on a Sylow ell-subgroup and cut down by stable elements.

# %%
from qdivided.gcoh import cohomology, family, group_from_spec

for n in range(1, 5):
    G = family("Sym").group(n)
    print(G.name, G.order, [cohomology(G, t, 2).dim for t in range(5)])

# %% [markdown]
# The general linear groups GL_n(F_2) at ell = 3.  Note the same answer
# for n = 2 and n = 3 in low degrees.

# %%
GL = family("GL", 2)
for n in (1, 2, 3):
    G = GL.group(n)
    print(G.name, G.order, [cohomology(G, t, 3).dim for t in range(5)])

# %% [markdown]
# Any group can be given by its multiplication table.

# %%
z4 = [[(i + j) % 4 for j in range(4)] for i in range(4)]
print([cohomology(group_from_spec({"family": "Table", "mul": z4}), t, 2).dim for t in range(4)])
