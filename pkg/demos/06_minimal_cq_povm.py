# %% [markdown]
# # A measurement that decides CQ without full tomography
#
# A POVM cannot see operators orthogonal to all its elements (its blind
# subspace X_E). It decides CQ membership when X_E only contains directions
# I (x) Xi, since those never change the answer. That needs d^4 - d^2 + 1
# outcomes, against d^4 for informational completeness.

# %%
import numpy as np

from corrwit import povm, states, witness

for d in (2, 3):
    p = povm.build_minimal_cq_povm(d)
    a = povm.analyze(p)
    print(f"d={d}: {len(p)} outcomes, dim span {a.dim_e}, dim X_E {a.dim_xe}, decides CQ {a.decides_cq}, IC {a.informationally_complete}")

# %% [markdown]
# Identical statistics for a CQ state and its shift along I (x) Xi; different
# statistics across any CQ boundary crossing.

# %%
p = povm.build_minimal_cq_povm(2)
base = states.sample_cq(2, seed=3)
_, shifted, _ = witness.cq_invariance_check(base, np.diag([1.0, -1.0]))
print("distinguishes base vs shifted:", povm.distinguishes(p, base.op, shifted.op))
cert = witness.build_noncq_perturbation(states.random_direction(2, seed=3))
print("distinguishes base vs non-CQ kappa:", povm.distinguishes(p, cert.base.op, cert.kappa.op))

# %% [markdown]
# Dimension count for random POVMs: span plus blind subspace is always D^2.

# %%
for k in (3, 10, 20):
    a = povm.analyze(povm.random_povm(9, k, seed=k))
    print(f"k={k}: {a.dim_e} + {a.dim_xe} = {a.dim_e + a.dim_xe}")
