"""Variable Lebesgue spaces: modulars and Luxemburg norms.

The Luxemburg norm ``inf{lam > 0 : rho_p(f/lam) <= 1}`` is found from the
monotone equation ``rho_p(f/lam) = 1``.  In ``t = log lam`` the function
``G(t) = log rho_p(f e^{-t})`` is a log-sum-exp of affine functions, hence
convex and decreasing, and Newton's method started to the left of the root
climbs to it monotonically.  :func:`luxemburg_rows` solves many such
problems at once (one per row); a plain bisection (:func:`luxemburg_bisect`)
is kept as an independent reference.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exponents import VariableExponent
from .grid import Box, GridError, GridFunction

__all__ = [
    "RegionMask",
    "modular",
    "modular_array",
    "luxemburg_norm",
    "luxemburg_rows",
    "log_luxemburg_rows",
    "luxemburg_bisect",
]

REL_TOL = 1e-12
MAX_ITER = 200


@dataclass(frozen=True, eq=False)
class RegionMask:
    """Indicator of a set ``E`` on the grid of ``box``."""

    box: Box
    indicator: np.ndarray = field(repr=False)

    def __post_init__(self):
        ind = np.asarray(self.indicator, dtype=bool)
        if ind.shape != self.box.shape:
            raise GridError(f"mask shape {ind.shape} does not match {self.box.shape}")
        ind.flags.writeable = False
        object.__setattr__(self, "indicator", ind)

    @classmethod
    def full(cls, box: Box) -> "RegionMask":
        return cls(box, np.ones(box.shape, dtype=bool))

    @classmethod
    def from_predicate(cls, box: Box, pred) -> "RegionMask":
        return cls(box, np.broadcast_to(pred(*box.coords()), box.shape))

    @property
    def measure(self) -> float:
        return float(self.indicator.sum()) * self.box.cell_volume


def _as_array(f) -> np.ndarray:
    return np.asarray(f.values if isinstance(f, GridFunction) else f)


def modular_array(a: np.ndarray, p: np.ndarray, cell: float) -> float:
    """``cell * sum a^p`` for ``a >= 0``; infinite ``p`` contributes 0 or inf."""
    a = np.asarray(a, dtype=float).ravel()
    p = np.asarray(p, dtype=float).ravel()
    inf = np.isinf(p)
    if np.any(a[inf] > 1.0):
        return np.inf
    fin = ~inf
    with np.errstate(over="ignore"):
        return float(cell * np.sum(a[fin] ** p[fin]))


def modular(f: GridFunction, p: VariableExponent, E: RegionMask | None = None) -> float:
    """``rho_p(f) = int_E |f(x)|^{p(x)} dx`` (Riemann sum)."""
    mask = np.ones(f.box.shape, bool) if E is None else E.indicator
    return modular_array(np.abs(f.values)[mask], p.values[mask], f.box.cell_volume)


def luxemburg_rows(a: np.ndarray, p: np.ndarray, cell: float,
                   tol: float = REL_TOL) -> np.ndarray:
    """Luxemburg norms of each row of ``a`` (non-negative) with exponent ``p``.

    Parameters
    ----------
    a : ndarray, shape (k, M) or (M,)
        Absolute values, one problem per row.
    p : ndarray, shape (M,) or (k, M)
        Exponent samples; ``inf`` allowed.
    cell : float
        Measure of one sample cell.

    Returns
    -------
    ndarray, shape (k,)
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    with np.errstate(divide="ignore"):
        return np.exp(log_luxemburg_rows(np.log(a), p, cell, tol))


def log_luxemburg_rows(la: np.ndarray, p: np.ndarray, cell: float,
                       tol: float = REL_TOL) -> np.ndarray:
    """``log`` of :func:`luxemburg_rows` from ``log a`` (``-inf`` for zeros).

    Working with logarithms avoids underflow for rows of tiny values.
    """
    la = np.atleast_2d(np.asarray(la, dtype=float))
    p = np.broadcast_to(np.asarray(p, dtype=float), la.shape)
    k = la.shape[0]
    inf = np.isinf(p)
    fin = (~inf) & np.isfinite(la)
    if np.any(inf):
        lam_inf = np.where(inf, la, -np.inf).max(axis=1)
    else:
        lam_inf = np.full(k, -np.inf)
    pf = np.where(fin, p, 0.0)
    la = np.where(fin, la, -np.inf)
    logc = np.log(cell)
    active = fin.any(axis=1)
    out = lam_inf.copy()
    if not active.any():
        return out
    la, pf, fmask = la[active], pf[active], fin[active]
    # start left of the root: the single largest term already reaches 1
    with np.errstate(invalid="ignore"):
        start = np.where(fmask, la + logc / np.where(fmask, pf, 1.0), -np.inf)
    t = start.max(axis=1)
    pending = np.ones(t.size, bool)
    for _ in range(MAX_ITER):
        idx = np.flatnonzero(pending)
        if idx.size == 0:
            break
        with np.errstate(invalid="ignore"):
            e = logc + pf[idx] * (la[idx] - t[idx, None])
        e = np.where(fmask[idx], e, -np.inf)
        m = e.max(axis=1)
        w = np.exp(e - m[:, None])
        s = w.sum(axis=1)
        G = m + np.log(s)
        dG = -(w * pf[idx]).sum(axis=1) / s
        step = -G / dG
        step = np.maximum(step, 0.0)  # rounding guard: never move left
        t[idx] += step
        # the step is the relative change of lam; below a few ulps of t it is rounding
        pending[idx] = step > np.maximum(tol * 0.01, 8 * np.spacing(np.abs(t[idx])))
    out[active] = np.maximum(lam_inf[active], t)
    return out


def luxemburg_bisect(a: np.ndarray, p: np.ndarray, cell: float,
                     tol: float = REL_TOL) -> float:
    """Reference Luxemburg norm of a single array by bisection in ``log lam``."""
    a = np.asarray(a, dtype=float).ravel()
    p = np.asarray(p, dtype=float).ravel()
    if not np.any(a > 0):
        return 0.0
    amax = a.max()
    lo = np.log(1e-12 * amax)
    hi = np.log(amax * max(a.size * cell, 1.0) ** (1.0 / p.min()) + 1.0)
    while modular_array(a / np.exp(hi), p, cell) > 1.0:
        hi += 1.0
    while modular_array(a / np.exp(lo), p, cell) <= 1.0:
        lo -= 1.0
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if modular_array(a / np.exp(mid), p, cell) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return float(np.exp(hi))


def luxemburg_norm(f: GridFunction | np.ndarray, p: VariableExponent,
                   E: RegionMask | None = None) -> float:
    """``||f | L_p(.)(E)||``; ``0`` for ``f = 0`` on ``E``."""
    vals = np.abs(_as_array(f))
    box = p.box
    mask = np.ones(box.shape, bool) if E is None else E.indicator
    return float(luxemburg_rows(vals[mask][None, :], p.values[mask], box.cell_volume)[0])
