# %% [markdown]
# # Classical-quantum, quantum-classical and classical-classical states
#
# Write rho = sum_kl A_kl (x) |k><l|. The state is CQ exactly when the blocks
# A_kl are normal and commute with each other, so one basis of the first
# factor diagonalizes all of them.

# %%
import numpy as np

from corrwit import detect, states
from corrwit.linalg import block_family

rho = states.sample_cq(2, seed=4)
ok, cert = detect.cq_check(rho)
print("CQ:", ok, " largest commutator:", f"{cert.max_commutator:.1e}", " residual:", f"{cert.residual:.1e}")
print("common eigenbasis of the first factor:\n", np.round(cert.basis, 4))

# %% [markdown]
# A generic CQ state is not QC: the blocks of the second factor do not commute.

# %%
print(detect.classify(rho).as_dict())

# %% [markdown]
# A generic full-rank state fails all three tests; the certificate names the
# offending pair of blocks.

# %%
generic = states.random_density_full_rank(4, seed=7, d=2)
ok, cert = detect.cq_check(generic)
print("CQ:", ok, " worst pair:", cert.pair, f" threshold {cert.threshold:.1e}")
print(f"largest commutator {cert.max_commutator:.3e}, largest normality defect {cert.max_normality:.3e}")
fam = block_family(generic.op, 2, "A")
print("norm of [A_00, A_01]:", np.linalg.norm(fam[0, 0] @ fam[0, 1] - fam[0, 1] @ fam[0, 0]))

# %% [markdown]
# The inclusion chain CC => CQ => PPT on a batch of CC samples:

# %%
reports = [detect.classify(states.sample_cc(3, s)) for s in range(200)]
print("all CC:", all(r.cc for r in reports), " all CQ:", all(r.cq for r in reports), " all PPT:", all(r.ppt for r in reports))
