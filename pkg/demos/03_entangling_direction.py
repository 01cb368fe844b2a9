# %% [markdown]
# # Every direction leads out of the separable states
#
# For any nonzero traceless Hermitian direction delta, choose local unitaries
# U, V, start at the boundary isotropic state of (U (x) V)|psi0>, and step a
# small lam along delta. The result is a state with a negative partial
# transpose, hence entangled.

# %%
import numpy as np

from corrwit import states, witness

delta = states.random_direction(3, seed=2)
cert = witness.build_entangling_perturbation(delta)
print("branch of the unitary selection:", cert.branch)
print("lambda:", cert.lam, " min eig of kappa^tau:", cert.min_pt_eig)
print("certificate verifies:", cert.verify())

# %% [markdown]
# The 4x4 compression of the rotated partial transpose has a nonzero last
# row, which is what forces the sign change. The sign of lam is opposite to
# the corner entry alpha.

# %%
print("alpha:", cert.reduced.alpha, " |a|:", np.linalg.norm(cert.reduced.a))
print(np.round(cert.reduced.matrix(), 3))

# %% [markdown]
# Repeat over many random directions.

# %%
worst = max(witness.build_entangling_perturbation(states.random_direction(2, s)).min_pt_eig for s in range(200))
print("largest min pt eig over 200 directions at d=2:", worst)
