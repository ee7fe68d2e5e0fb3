"""The compactly supported profile ``exp(-1/(1-t^2))`` and smooth cutoffs.

Derivatives are exact: ``b^(k)(t) = P_k(t) (1-t^2)^(-2k) b(t)`` with the
polynomial recursion ``P_{k+1} = P_k' (1-t^2)^2 + 4k t (1-t^2) P_k - 2t P_k``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P

__all__ = ["bump", "bump_derivative", "smooth_step"]


@lru_cache(maxsize=None)
def _poly(k: int) -> np.ndarray:
    if k == 0:
        return np.array([1.0])
    prev = _poly(k - 1)
    one_minus = np.array([1.0, 0.0, -1.0])  # 1 - t^2
    t = np.array([0.0, 1.0])
    term1 = P.polymul(P.polyder(prev), P.polymul(one_minus, one_minus))
    term2 = P.polymul(4.0 * (k - 1) * t, P.polymul(one_minus, prev))
    term3 = P.polymul(-2.0 * t, prev)
    return P.polyadd(P.polyadd(term1, term2), term3)


def bump(t):
    """``exp(-1/(1-t^2))`` on ``|t| < 1``, zero elsewhere."""
    return bump_derivative(t, 0)


def bump_derivative(t, k: int):
    """Exact ``k``-th derivative of :func:`bump`."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    u = 1.0 - ti * ti
    # exp(-1/u) underflows before u^{-2k} overflows for u > ~1e-3
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        val = P.polyval(ti, _poly(k)) * np.exp(-1.0 / u - 2 * k * np.log(u))
    out[inside] = np.nan_to_num(val, nan=0.0, posinf=0.0, neginf=0.0)
    return out


def _psi(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def smooth_step(t, a: float, b: float):
    """C-infinity step: 1 for ``t <= a``, 0 for ``t >= b``, strictly between inside."""
    t = np.asarray(t, dtype=float)
    num = _psi(b - t)
    return num / (num + _psi(t - a))
