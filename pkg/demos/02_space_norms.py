"""
Besov-type and Triebel-Lizorkin-type norms
==========================================

Littlewood-Paley blocks are taken by FFT with a band-limited admissible
pair.  Weights ``2^{j s(x)}`` and the Morrey-type supremum over dyadic cubes
with ``phi(Q) = |Q|^tau`` turn them into a single number per function.
"""
# %%
import numpy as np

from varbesov.grid import Box, make_grid_function
from varbesov.kernels import make_admissible_pair
from varbesov.spaces import B_PRESET, F_PRESET, space_norm, space_norm_variants, thresholds

box = Box(1, 8.0, 512)
pair = make_admissible_pair(box)
B, F = B_PRESET.build(box), F_PRESET.build(box)

# %%
# The lower bounds each statement places on its parameters.
for P in (B, F):
    print(P.family, {k: round(v, 4) for k, v in thresholds(P).items()})

# %%
# Narrow gaussians carry more high-frequency energy, so the norms grow as
# the width shrinks; roughly like width^{-(s - 1/p)}.
for width in (2.0, 1.0, 0.5, 0.25):
    f = make_grid_function(lambda x: np.exp(-(x / width) ** 2), box)
    print(f"width {width:4}:  B {space_norm(f, B, pair):9.4f}   F {space_norm(f, F, pair):9.4f}")

# %%
# The Peetre maximal variant dominates the convolution variant once
# ``a`` is above its bound.
f = make_grid_function(lambda x: np.exp(-x * x) * np.cos(3 * x), box)
a = thresholds(F)["peetre_a"] + 0.5
print("convolution:", space_norm_variants(f, F, pair))
print("Peetre     :", space_norm_variants(f, F, pair, a=a, variant="peetre"))

# %%
# The levels themselves, if matplotlib is around.
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    levels = pair.levels(f, B.J)
    x = box.axis()
    fig, ax = plt.subplots(figsize=(7, 3))
    for j, lev in enumerate(levels):
        ax.plot(x, np.real(lev), label=f"j = {j}")
    ax.set_xlim(-4, 4)
    ax.legend()
    fig.savefig("levels.png", dpi=100, bbox_inches="tight")
    print("wrote levels.png")
