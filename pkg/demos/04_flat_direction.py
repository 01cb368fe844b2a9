# %% [markdown]
# # Why the unitaries matter
#
# Along delta = |1,1><1,1| - |d,d><d,d| the canonical boundary state stays PPT
# for every coefficient up to 2/(d(d+1)). Without rotating the maximally
# entangled vector, small steps along this direction never reveal entanglement.

# %%
import numpy as np

from corrwit import witness

for d in range(2, 6):
    _, thr = witness.flat_direction_counterexample(d)
    grid = np.linspace(-thr, thr, 101)
    inside = witness.flat_direction_min_pt_eig(d, grid).min()
    outside = witness.flat_direction_min_pt_eig(d, [1.05 * thr])[0]
    print(f"d={d}: threshold {thr:.4f}  min pt eig on grid {inside:+.1e}  at 1.05x {outside:+.2e}")

# %% [markdown]
# The general construction picks rotated unitaries and succeeds right away.

# %%
delta, _ = witness.flat_direction_counterexample(2)
cert = witness.build_entangling_perturbation(delta)
print("branch:", cert.branch, " lambda:", cert.lam, " min pt eig:", cert.min_pt_eig)
print("V =\n", np.round(cert.V, 3))
