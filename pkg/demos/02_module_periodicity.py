# %% [markdown]
# # Finitely presented modules and eventual periodicity
#
# A graded module over the divided power algebra has Hilbert function
# that is eventually periodic.  The invariants epsilon and lambda certify
# the period b_epsilon and where it starts.

# %%
from qdivided import QContext, FPModule, hilbert, epsilon_lambda, predict_period
from qdivided.dalg import DElement

ctx = QContext(3, 2)

# %% [markdown]
# Start with the quotient by x^[3]: one generator in degree 0 and one relation.

# %%
M = FPModule(ctx, [0], [{0: DElement(ctx, {3: 1})}])
print(hilbert(M, 30))
inv = epsilon_lambda(M, 40)
print("epsilon =", inv.epsilon, " lambda =", inv.lam)
cert = predict_period(M, 40)
print("period", cert.period, "from degree", cert.onset, "certified:", cert.ok)

# %% [markdown]
# Two generators with a mixed relation behave the same way, only with a
# different period.

# %%
N = FPModule(ctx, [0, 1], [{0: DElement(ctx, {7: 1}), 1: DElement(ctx, {6: 2})}])
print(hilbert(N, 40))
cert = predict_period(N, 60)
print("period", cert.period, "onset", cert.onset, "ok", cert.ok)

# %% [markdown]
# Modules round-trip through JSON, which is also what the command line
# `qdivided dmod analyze` reads.

# %%
import json

text = json.dumps(N.to_json(), sort_keys=True)
print(text)
assert FPModule.from_json(json.loads(text)).to_json() == N.to_json()
