# %% [markdown]
# # q-binomials and the q-divided power algebra
#
# Fix a prime ell and an integer q prime to ell.  Everything below lives
# over F_ell, and the interesting behaviour comes from the multiplicative
# order w of q mod ell.

# %%
from qdivided import QContext, q_binomial, b_value, fl
from qdivided.dalg import x, d_mul, d_derive, to_y_basis, y_radices
from qdivided.qarith import gaussian_binomial_int

ctx = QContext(3, 2)  # ell = 3, q = 2, so w = 2
print("w =", ctx.w)

# %% [markdown]
# Gaussian binomials over Z, and their images in F_3.  The rows vanish in
# the middle exactly at n = b_i, the "b-sequence" 1, 2, 6, 18, ...

# %%
for n in range(1, 10):
    print(n, [gaussian_binomial_int(n, k, 2) for k in range(n + 1)],
          [q_binomial(n, k, ctx) for k in range(n + 1)])

print("b:", [b_value(i, ctx) for i in range(6)])
print("fl(7) =", fl(7, ctx), " fl(6) =", fl(6, ctx))

# %% [markdown]
# Products x^[n] x^[m] carry the q-binomial as a structure constant, and
# the q-derivation lowers degree by one.

# %%
a, b = x(2, ctx), x(4, ctx)
print("x^[2] x^[4] =", d_mul(a, b).to_json())
print("d x^[6] =", d_derive(x(6, ctx)).to_json())
print("d^3 x^[6] =", d_derive(x(6, ctx), 3).to_json())

# %% [markdown]
# As an algebra the ring is generated by y_i = x^[b_i] with truncated
# powers; the radices bound each exponent.

# %%
print("radices:", y_radices(ctx, 4))
for coeff, mono in to_y_basis(x(11, ctx)):
    print(coeff, mono)
