"""
Admissible pairs versus local means
===================================

Compactly supported local means with enough vanishing moments give norms
equivalent to the band-limited ones.  The equivalence constants are not
known, so we measure the ratio spread over a test family and watch it
stay put when the grid is refined.
"""
# %%
import math

from varbesov.grid import Box
from varbesov.kernels import check_moments, make_admissible_pair, make_local_means
from varbesov.spaces import B_PRESET, canonical_family, equivalence_experiment, thresholds

box = Box(1, 8.0, 512)
N = math.floor(thresholds(B_PRESET.build(box))["moment_order"]) + 1
print("moments needed:", N)
print("moment residual on a fine grid:", check_moments(make_local_means(3.0, N, Box(1, 8.0, 4096)), N))

# %%
rep = equivalence_experiment(B_PRESET, make_admissible_pair,
                             lambda b: make_local_means(3.0, N, b), box,
                             family=canonical_family()[:10])
for item in rep["items"]:
    print(f"{item['name']:>22}  {item['ratio']:.4f}")
print("spread", rep["spread"], "-> refined", rep["refined"]["spread"],
      f"({rep['spread_change']:.1%} change)")
