"""
Variable-exponent Lebesgue norms on a grid
==========================================

A Luxemburg norm is the smallest ``lam`` with ``modular(f / lam) <= 1``.
This script evaluates a few by hand and with the library, then measures
the log-Hoelder constants of an exponent.
"""
# %%
import numpy as np

from varbesov.exponents import VariableExponent, check_log_holder_global, check_log_holder_local
from varbesov.grid import Box, make_grid_function
from varbesov.lebesgue import RegionMask, luxemburg_bisect, luxemburg_norm, modular

box = Box(1, 1.0, 512)
half = RegionMask.from_predicate(box, lambda x: x >= 0)

# %%
# A two-piece exponent: 2 on [0, 1/2), 4 on [1/2, 1).  For f = 2 the modular
# is 1/2 * 4 + 1/2 * 16 = 10, and for f = 1 the norm solves t/2 + t^2/2 = 1.
p = VariableExponent.from_function(lambda x: np.where(x < 0.5, 2.0, 4.0), box)
print("modular of f = 2 :", modular(make_grid_function(2.0, box), p, half))
print("norm of f = 1    :", luxemburg_norm(make_grid_function(1.0, box), p, half))

# %%
# Newton in log-space against plain bisection on a smooth exponent.
p = VariableExponent.from_function(lambda x: 1.5 + np.sin(3 * x) ** 2, box)
f = make_grid_function(lambda x: np.exp(-4 * x * x) * (1 + x), box)
print("Newton   :", luxemburg_norm(f, p))
print("bisection:", luxemburg_bisect(np.abs(f.values), p.values, box.h))

# %%
# Log-Hoelder constants of p(x) = 2 + 0.5 sin(x) on a wider box.
wide = Box(1, 8.0, 512)
p = VariableExponent.from_function(lambda x: 2 + 0.5 * np.sin(x), wide)
print("p- / p+          :", p.p_minus, p.p_plus)
print("local constant   :", check_log_holder_local(p))
print("decay to 2       :", check_log_holder_global(p, g_inf=2.0))
