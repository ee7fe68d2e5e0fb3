"""
Atoms, synthesis and local means
================================

Smooth atoms are rescaled bumps with vanishing moments.  A finite sum of
atoms has a space norm controlled by the sequence norm of its
coefficients; here we estimate that constant and check how local means
kernels decay against an atom.
"""
# %%
from varbesov.atoms import (DyadicCube, kernel_atom_estimates, make_smooth_atom,
                            synthesis_experiment, validate_nonsmooth_atom)
from varbesov.grid import Box
from varbesov.kernels import make_admissible_pair, make_local_means
from varbesov.spaces import F_PRESET

box = Box(1, 8.0, 512)
a = make_smooth_atom(DyadicCube(1, (2,)), 2, 2, box, shape_seed=1)
rep = validate_nonsmooth_atom(a, 2, 2)
print("validated:", rep["passed"], " regularity", round(rep["regularity"], 6))

# %%
# Synthesis constant over a handful of random coefficient sets.
P = F_PRESET.build(box)
res = synthesis_experiment(P, make_admissible_pair(box), 2, 1, levels=range(3), trials=8)
print("space norm / sequence norm:", round(res["min_ratio"], 4), "..", round(res["max_ratio"], 4))

# %%
# Decay of k_j * a_Q above the atom's level nu = 1.  Just above nu the sups
# are pre-asymptotic, so the fit uses j = 7..10 on 2^20 points of [-2, 2);
# coarser grids let discretization error swamp the tiny sups at high j.
fine = Box(1, 2.0, 2 ** 20)
lm = make_local_means(3.0, 4, fine)
est = kernel_atom_estimates(lm, make_smooth_atom(DyadicCube(1, (0,)), 4, 2, fine), range(7, 11))
for row in est["levels"]:
    print(f"j = {row['j']}:  sup {row['sup']:.3e}")
print("fitted rate", round(est["rate_above"], 2), "expected", est["expected_above"])
