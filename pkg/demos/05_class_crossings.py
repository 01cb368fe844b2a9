# %% [markdown]
# # Leaving the CQ, CC and CQ-or-QC classes
#
# Directions of the form I (x) Xi never move a CQ state out of the CQ class.
# Every other direction does, starting from a simple CC mixture.

# %%
import numpy as np

from corrwit import detect, states, witness

base = states.sample_cq(2, seed=0)
lam, kappa, still_cq = witness.cq_invariance_check(base, np.diag([1.0, -1.0]))
print(f"step {lam} along I (x) Z keeps CQ:", still_cq)

try:
    witness.build_noncq_perturbation(states.Direction.from_operator(np.kron(np.eye(2), np.diag([1.0, -1.0])), 2))
except witness.InvariantDirectionError as exc:
    print("as expected:", exc)

# %%
delta = states.Direction(np.kron([[0, 1], [1, 0]], [[0, 1], [1, 0]]), 2)
cert = witness.build_noncq_perturbation(delta)
print("X (x) X:  base CQ", detect.cq_check(cert.base)[0], "| kappa CQ", detect.cq_check(cert.kappa)[0], "| lambda", cert.lam)

# %% [markdown]
# The CC crossing falls back to the swapped construction for I (x) Xi, and the
# last construction exits both the CQ and the QC classes at once.

# %%
xi_dir = states.Direction.from_operator(np.kron(np.eye(3), np.diag([1.0, 0.0, -1.0])), 3)
print("non-CC, I (x) Xi:", witness.build_noncc_perturbation(xi_dir).branch)
for s in range(3):
    c = witness.build_non_cq_or_qc_perturbation(states.random_direction(3, s))
    print(f"seed {s}: kappa CQ {detect.cq_check(c.kappa)[0]}, kappa QC {detect.qc_check(c.kappa)[0]}, lambda {c.lam}")
