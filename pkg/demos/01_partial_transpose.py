# %% [markdown]
# # Partial transpose and the PPT test
#
# A state on C^d (x) C^d is stored as a d^2 x d^2 numpy array, with the
# bipartite index (i, k) mapped to i * d + k.

# %%
import numpy as np

from corrwit import detect, states
from corrwit.linalg import min_eigenvalue, partial_transpose

d = 3
psi0 = states.canonical_max_entangled(d)
bell = np.outer(psi0, psi0.conj())

# %% [markdown]
# The partial transpose of the maximally entangled projector is the flip
# operator divided by d, so its smallest eigenvalue is -1/d.

# %%
print("flip / d matches:", np.allclose(partial_transpose(bell), states.flip_operator(d) / d))
print("min eig of partial transpose:", min_eigenvalue(partial_transpose(bell)), "expected", -1 / d)

# %% [markdown]
# Mixing with enough white noise gives the isotropic state that sits exactly
# on the PPT boundary: the smallest eigenvalue of its partial transpose is 0.

# %%
iso = states.isotropic_boundary_state(psi0)
print("isotropic state spectrum:", np.round(np.linalg.eigvalsh(iso.op), 6))
print("PPT verdict and min eig:", detect.ppt_check(iso))

# %% [markdown]
# Local unitaries keep it on the boundary.

# %%
rng = np.random.default_rng(1)
for _ in range(3):
    u, v = states.random_unitary(d, rng), states.random_unitary(d, rng)
    rotated = states.isotropic_boundary_state(states.max_entangled(u, v))
    print(f"rotated boundary state: min pt eig {detect.ppt_check(rotated)[1]:+.2e}")
