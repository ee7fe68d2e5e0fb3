"""Mixed sequence-Lebesgue spaces, dyadic cubes and Morrey-type suprema.

Sequences ``(f_j)_{j=0..J}`` are stored as stacked arrays.  Two quasi-norms:

* ``L_p(l_q)``: the Luxemburg norm of ``(sum_j |f_j|^q)^{1/q}``;
* ``l_q(L_p)``: the Luxemburg-type norm of the semi-modular
  ``sum_j inf{lam_j : rho_p(f_j / lam_j^{1/q}) <= 1}``.

The ``phi``-modified versions take the supremum over dyadic cubes ``P`` of
``phi(P)^{-1}`` times the norm of ``(f_j)_{j >= max(j_P, 0)}`` restricted
to ``P``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .exponents import ExponentError, VariableExponent
from .grid import Box, GridError, GridFunction
from .lebesgue import (MAX_ITER, RegionMask, log_luxemburg_rows, luxemburg_rows,
                       modular_array)

__all__ = [
    "DyadicCube",
    "FunctionSequence",
    "SetFunction",
    "enumerate_dyadic_cubes",
    "default_cube_range",
    "sample_plan",
    "check_set_function_class",
    "norm_Lp_lq",
    "modular_lq_Lp",
    "modular_lq_Lp_general",
    "norm_lq_Lp",
    "phi_norm_B",
    "phi_norm_F",
    "scan_to_csv",
]


@dataclass(frozen=True, order=True)
class DyadicCube:
    """``Q_{jk} = 2^{-j}([0,1)^n + k)``."""

    j: int
    k: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.k)

    @property
    def side(self) -> float:
        return 2.0 ** (-self.j)

    @property
    def j_Q(self) -> int:
        return self.j

    @property
    def corner(self) -> np.ndarray:
        return self.side * np.asarray(self.k, dtype=float)

    @property
    def center(self) -> np.ndarray:
        return self.corner + 0.5 * self.side

    @property
    def volume(self) -> float:
        return self.side ** self.n

    def dilate_bounds(self, a: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
        """Lower and upper corners of the concentric cube ``aQ``."""
        half = 0.5 * a * self.side
        return self.center - half, self.center + half

    def contains(self, *coords: np.ndarray) -> np.ndarray:
        lo = self.corner
        hi = lo + self.side
        inside = np.ones(np.broadcast(*coords).shape, bool)
        for c, a, b in zip(coords, lo, hi):
            inside &= (c >= a) & (c < b)
        return inside

    def index_slices(self, box: Box) -> tuple[slice, ...]:
        """Grid index ranges of the nodes lying in the cube (half-open)."""
        out = []
        for a in self.corner:
            b = a + self.side
            i0 = math.ceil((a + box.L) / box.h - 1e-9)
            i1 = math.ceil((b + box.L) / box.h - 1e-9)
            out.append(slice(min(max(i0, 0), box.N), min(max(i1, 0), box.N)))
        return tuple(out)


def enumerate_dyadic_cubes(box: Box, j_min: int, j_max: int,
                           unit_or_smaller: bool = False) -> list[DyadicCube]:
    """All dyadic cubes with ``j_min <= j <= j_max`` that meet ``[-L, L)^n``.

    With ``unit_or_smaller`` only ``j >= 0`` is kept (the family ``Q*``).
    """
    if j_min > j_max:
        raise GridError(f"j_min={j_min} > j_max={j_max}")
    if 2.0 ** (-j_max) < box.h * (1 - 1e-12):
        raise GridError(
            f"cubes of side 2^-{j_max} are finer than the grid spacing {box.h}")
    if unit_or_smaller:
        j_min = max(j_min, 0)
    cubes = []
    for j in range(j_min, j_max + 1):
        s = 2.0 ** j
        k_lo = math.floor(-box.L * s)
        k_hi = math.ceil(box.L * s) - 1
        for k in product(range(k_lo, k_hi + 1), repeat=box.n):
            cubes.append(DyadicCube(j, tuple(k)))
    return cubes


def default_cube_range(box: Box, min_samples: int = 8) -> tuple[int, int]:
    """``(j_min, j_max)``: cubes from 4x the box down to ``min_samples`` nodes per side."""
    j_min = -math.ceil(math.log2(2 * box.L)) - 2
    j_max = math.floor(math.log2(box.N / (2 * box.L) / min_samples) + 1e-9)
    return j_min, j_max


@dataclass(eq=False)
class SetFunction:
    """A positive function ``phi(x, r)`` of cube centre and side length.

    ``evaluator`` is vectorized: ``evaluator(x, r)`` with ``x`` of shape
    ``(m, n)`` and ``r`` of shape ``(m,)``.  The class constants are filled
    in by :func:`check_set_function_class`.
    """

    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = "phi"
    c1: float | None = None
    c1_tilde: float | None = None
    c2: float | None = None

    def __call__(self, x, r) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        r = np.broadcast_to(np.asarray(r, dtype=float), (x.shape[0],))
        return np.asarray(self.evaluator(x, r), dtype=float)

    def of_cube(self, Q: DyadicCube) -> float:
        return float(self(Q.center[None, :], np.array([Q.side]))[0])

    @classmethod
    def one(cls) -> "SetFunction":
        return cls(lambda x, r: np.ones(x.shape[0]), name="1")

    @classmethod
    def cube_power(cls, tau: float, n: int) -> "SetFunction":
        """``phi(Q) = |Q|^tau``, i.e. ``phi(x, r) = r^{n tau}``."""
        return cls(lambda x, r: r ** (n * tau), name=f"|Q|^{tau}")

    @property
    def log2_c1_tilde(self) -> float:
        if self.c1_tilde is None:
            raise ValueError("class constants not computed; run check_set_function_class")
        return math.log2(self.c1_tilde)


def sample_plan(n: int, seed: int = 0, n_points: int = 200, radius: float = 8.0,
                log2_r: tuple[int, int] = (-10, 10)) -> dict:
    """Seeded ``(x, r)`` pairs and ``(x, y, r)`` triples with ``|x - y| <= r``."""
    rng = np.random.default_rng(seed)
    rs = 2.0 ** np.arange(log2_r[0], log2_r[1] + 1, dtype=float)
    x = rng.uniform(-radius, radius, size=(n_points, n))
    X = np.repeat(x, rs.size, axis=0)
    R = np.tile(rs, n_points)
    u = rng.normal(size=X.shape)
    u *= (rng.uniform(0, 1, size=(X.shape[0], 1)) ** (1.0 / n)
          / np.linalg.norm(u, axis=1, keepdims=True))
    Y = X + R[:, None] * u
    return {"x": X, "r": R, "y": Y}


def check_set_function_class(phi: SetFunction, plan: dict | None = None,
                             n: int = 1) -> tuple[float, float, float]:
    """Empirical ``(c1, c1_tilde, c2)`` of the doubling and compatibility bounds.

    ``c1 = max phi(x,r)/phi(x,2r)``, ``c1_tilde = max phi(x,2r)/phi(x,r)`` and
    ``c2`` the largest two-sided ratio ``phi(x,r)/phi(y,r)`` over the plan.
    The constants are also stored on ``phi``.
    """
    if plan is None:
        plan = sample_plan(n)
    X, R, Y = plan["x"], plan["r"], plan["y"]
    a, b, c = phi(X, R), phi(X, 2 * R), phi(Y, R)
    if np.any(a <= 0) or np.any(b <= 0) or np.any(c <= 0):
        raise ValueError("set function must be positive")
    ratio = a / b
    c1 = float(ratio.max())
    c1t = float((1.0 / ratio).max())
    comp = a / c
    c2 = float(max(comp.max(), (1.0 / comp).max()))
    phi.c1, phi.c1_tilde, phi.c2 = c1, c1t, c2
    return c1, c1t, c2


@dataclass(frozen=True, eq=False)
class FunctionSequence:
    """Levels ``f_0, ..., f_J`` on a common box, stored as one array."""

    box: Box
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.asarray(self.data)
        d = d.reshape((-1,) + self.box.shape)
        if d.shape[0] < 1:
            raise GridError("a function sequence needs at least one level")
        d.flags.writeable = False
        object.__setattr__(self, "data", d)

    @classmethod
    def from_levels(cls, levels: Sequence[GridFunction]) -> "FunctionSequence":
        box = levels[0].box
        for g in levels:
            if g.box != box:
                raise GridError("levels live on different boxes")
        return cls(box, np.stack([g.values for g in levels]))

    @property
    def J(self) -> int:
        return self.data.shape[0] - 1

    def level(self, j: int) -> GridFunction:
        return GridFunction(self.box, self.data[j])

    def abs(self) -> np.ndarray:
        return np.abs(self.data)


def _exp_values(p: VariableExponent | float, box: Box) -> np.ndarray:
    if isinstance(p, VariableExponent):
        if p.box != box:
            raise GridError("exponent lives on a different box")
        return p.values
    return np.full(box.shape, float(p))


def _flat_region(fs: FunctionSequence, E: RegionMask | None):
    a = fs.abs().reshape(fs.data.shape[0], -1)
    if E is None:
        return a, None
    m = E.indicator.ravel()
    return a[:, m], m


# L_p(l_q) ----------------------------------------------------------------

def _Lp_lq_batch(a: np.ndarray, p: np.ndarray, q: np.ndarray, cell: float) -> np.ndarray:
    """``L_p(l_q)`` norms of blocks ``a[c]`` (levels x samples), one per cube."""
    with np.errstate(divide="ignore"):
        e = q[:, None, :] * np.log(a)
    m = e.max(axis=1)
    safe = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        lse = safe + np.log(np.exp(e - safe[:, None, :]).sum(axis=1))
    lG = np.where(np.isfinite(m), lse / q, -np.inf)
    return np.exp(log_luxemburg_rows(lG, p, cell))


def _Lp_lq_flat(a: np.ndarray, p: np.ndarray, q: np.ndarray, cell: float) -> float:
    return float(_Lp_lq_batch(a[None], p[None], q[None], cell)[0])


def norm_Lp_lq(fs: FunctionSequence, p: VariableExponent, q: VariableExponent,
               E: RegionMask | None = None) -> float:
    """``|| (sum_j |f_j|^q)^{1/q} | L_p(E) ||``; needs ``p+, q+ < inf``."""
    pv, qv = _exp_values(p, fs.box), _exp_values(q, fs.box)
    if not (np.all(np.isfinite(pv)) and np.all(np.isfinite(qv))):
        raise ExponentError("L_p(l_q) needs bounded exponents p+, q+ < inf")
    a, m = _flat_region(fs, E)
    pv, qv = pv.ravel(), qv.ravel()
    if m is not None:
        pv, qv = pv[m], qv[m]
    return _Lp_lq_flat(a, pv, qv, fs.box.cell_volume)


# l_q(L_p) ----------------------------------------------------------------

def _inner_simplified(a: np.ndarray, p: np.ndarray, q: np.ndarray, cell: float,
                      log_mu: float = 0.0) -> np.ndarray:
    """Per-level ``|| |a_j/mu|^q | L_{p/q} ||`` (finite ``q`` only)."""
    with np.errstate(divide="ignore"):
        la = np.log(a)
    return np.exp(log_luxemburg_rows(q[None, :] * (la - log_mu), p / q, cell))


def modular_lq_Lp(fs: FunctionSequence, p: VariableExponent, q: VariableExponent,
                  E: RegionMask | None = None) -> float:
    """Semi-modular of ``l_q(L_p)``.

    Uses the simplified form ``sum_j || |f_j|^q | L_{p/q} ||`` when ``q+ < inf``
    and the defining infima (by bisection) otherwise.
    """
    qv = _exp_values(q, fs.box)
    if not np.all(np.isfinite(qv)):
        return modular_lq_Lp_general(fs, p, q, E)
    pv = _exp_values(p, fs.box)
    a, m = _flat_region(fs, E)
    pv, qv = pv.ravel(), qv.ravel()
    if m is not None:
        pv, qv = pv[m], qv[m]
    return float(_inner_simplified(a, pv, qv, fs.box.cell_volume).sum())


def _inner_infimum(a: np.ndarray, p: np.ndarray, q: np.ndarray, cell: float,
                   tol: float = 1e-10) -> float:
    """``inf{lam > 0 : rho_p(a / lam^{1/q}) <= 1}`` by bisection in ``log lam``."""
    if not np.any(a > 0):
        return 0.0
    with np.errstate(divide="ignore"):
        inv_q = np.where(np.isinf(q), 0.0, 1.0 / q)

    def rho(log_lam: float) -> float:
        return modular_array(a * np.exp(-inv_q * log_lam), p, cell)

    finite_part = np.any((a > 0) & (inv_q > 0))
    if not finite_part:
        # lam^{1/inf} = 1: the constraint does not depend on lam
        return 0.0 if rho(0.0) <= 1.0 else np.inf
    # with q = inf somewhere the modular has a lam-independent floor
    floor = modular_array(np.where(inv_q == 0, a, 0.0), p, cell)
    if floor > 1.0:
        return np.inf
    hi = 0.0
    while rho(hi) > 1.0:
        hi = 2 * hi + 1.0
    lo = -1.0
    while rho(lo) <= 1.0:
        lo = 2 * lo
        if lo < -1e4:
            return 0.0
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if rho(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return float(np.exp(hi))


def modular_lq_Lp_general(fs: FunctionSequence, p: VariableExponent,
                          q: VariableExponent, E: RegionMask | None = None) -> float:
    """Semi-modular from its definition: each inner infimum by bisection."""
    pv, qv = _exp_values(p, fs.box).ravel(), _exp_values(q, fs.box).ravel()
    a, m = _flat_region(fs, E)
    if m is not None:
        pv, qv = pv[m], qv[m]
    return float(sum(_inner_infimum(row, pv, qv, fs.box.cell_volume) for row in a))


def _lq_Lp_batch(a: np.ndarray, p: np.ndarray, q: np.ndarray, cell: float) -> np.ndarray:
    """``l_q(L_p)`` norms of blocks ``a[c]`` (levels x samples), one per cube."""
    C, K, S = a.shape
    q0 = q.flat[0]
    if np.all(q == q0):
        # constant q: the modular scales like mu^{-q}
        with np.errstate(divide="ignore"):
            ln = log_luxemburg_rows(np.log(a).reshape(C * K, S),
                                    np.repeat(p, K, axis=0), cell).reshape(C, K)
        if np.isinf(q0):
            return np.exp(ln.max(axis=1))
        top = ln.max(axis=1, keepdims=True)
        safe = np.where(np.isfinite(top), top, 0.0)
        with np.errstate(divide="ignore"):
            out = safe[:, 0] + np.log(np.exp(q0 * (ln - safe)).sum(axis=1)) / q0
        return np.where(np.isfinite(top[:, 0]), np.exp(out), 0.0)
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
        return np.array([_lq_Lp_bisect(a[c][np.any(a[c] > 0, axis=1)], p[c], q[c], cell)
                         for c in range(C)])
    return _solve_outer(a, p, q, cell)


def _lq_Lp_flat(a: np.ndarray, p: np.ndarray, q: np.ndarray, cell: float) -> float:
    """``l_q(L_p)`` norm of the rows of ``a`` (levels x samples)."""
    return float(_lq_Lp_batch(a[None], p[None], q[None], cell)[0])


def _outer_value(la, q, r, pr, cell, u):
    """``log sum_j lam_j(u)`` and its derivative in ``u = log mu``, per cube.

    ``lam_j`` solves ``cell sum_x exp(r (q (la - u) - log lam)) = 1`` with
    ``r = p/q``; implicit differentiation gives
    ``d log lam_j / du = -sum w p / sum w r`` with ``w`` the modular terms.
    """
    C, K, S = la.shape
    lb = q[:, None, :] * (la - u[:, None, None])
    rr = np.broadcast_to(r[:, None, :], la.shape)
    llam = log_luxemburg_rows(lb.reshape(C * K, S), rr.reshape(C * K, S), cell).reshape(C, K)
    live = np.isfinite(llam)
    with np.errstate(invalid="ignore"):
        e = np.log(cell) + rr * (lb - llam[:, :, None])
    e = np.where(np.isfinite(la) & live[:, :, None], e, -np.inf)
    em = e.max(axis=2, keepdims=True)
    with np.errstate(invalid="ignore"):
        w = np.exp(e - np.where(np.isfinite(em), em, 0.0))
        slope = -(w * pr[:, None, :]).sum(axis=2) / (w * rr).sum(axis=2)
    slope = np.where(live, slope, 0.0)
    top = np.where(live, llam, -np.inf).max(axis=1)
    lam = np.where(live, np.exp(llam - top[:, None]), 0.0)
    S_ = lam.sum(axis=1)
    return top + np.log(S_), (lam * slope).sum(axis=1) / S_


def _solve_outer(a, p, q, cell, tol: float = 1e-14) -> np.ndarray:
    """Roots of the decreasing ``H_c(u) = log rho(f_c / e^u)`` by safeguarded Newton."""
    C, K, S = a.shape
    with np.errstate(divide="ignore"):
        la = np.log(a)
    r = p / q
    ln = log_luxemburg_rows(la.reshape(C * K, S), np.repeat(p, K, axis=0), cell).reshape(C, K)
    top = ln.max(axis=1)
    nonzero = np.isfinite(top)
    out = np.zeros(C)
    if not nonzero.any():
        return out
    la, p, q, r = la[nonzero], p[nonzero], q[nonzero], r[nonzero]
    ln, top = ln[nonzero], top[nonzero]
    u = top + np.log(np.exp(ln - top[:, None]).sum(axis=1))
    lo = np.full(u.size, -np.inf)
    hi = np.full(u.size, np.inf)
    pending = np.ones(u.size, bool)
    for _ in range(MAX_ITER):
        idx = np.flatnonzero(pending)
        if idx.size == 0:
            break
        H, dH = _outer_value(la[idx], q[idx], r[idx], p[idx], cell, u[idx])
        lo[idx] = np.where(H > 0, u[idx], lo[idx])
        hi[idx] = np.where(H <= 0, u[idx], hi[idx])
        step = np.where(dH < 0, -H / np.where(dH < 0, dH, -1.0), np.sign(H))
        step = np.clip(step, -2.0, 2.0)
        nxt = u[idx] + step
        both = np.isfinite(lo[idx]) & np.isfinite(hi[idx])
        outside = ~((lo[idx] < nxt) & (nxt < hi[idx]))
        nxt = np.where(outside & both, 0.5 * (lo[idx] + hi[idx]), nxt)
        scale = np.maximum(1.0, np.abs(u[idx]))
        done = (H == 0) | (np.abs(nxt - u[idx]) <= tol * scale) \
            | (hi[idx] - lo[idx] <= tol * scale)
        u[idx] = np.where(H == 0, u[idx], nxt)
        pending[idx] = ~done
    out[nonzero] = np.exp(u)
    return out


def _lq_Lp_bisect(a, p, q, cell, tol=1e-10) -> float:
    """Outer infimum by bisection on the general semi-modular (any ``p``, ``q``)."""
    if a.shape[0] == 0:
        return 0.0

    def rho(log_mu):
        return sum(_inner_infimum(row * math.exp(-log_mu), p, q, cell) for row in a)

    hi = math.log(luxemburg_rows(a, p, cell).sum()) + 1.0
    while rho(hi) > 1.0:
        hi += 1.0
    lo = hi - 2.0
    while rho(lo) <= 1.0:
        lo -= 1.0
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if rho(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return float(math.exp(hi))


def norm_lq_Lp(fs: FunctionSequence, p: VariableExponent, q: VariableExponent,
               E: RegionMask | None = None) -> float:
    """``inf{mu > 0 : rho_{l_q(L_p)}(f/mu) <= 1}``."""
    pv, qv = _exp_values(p, fs.box).ravel(), _exp_values(q, fs.box).ravel()
    a, m = _flat_region(fs, E)
    if m is not None:
        pv, qv = pv[m], qv[m]
    return _lq_Lp_flat(a, pv, qv, fs.box.cell_volume)


# phi-modified suprema -----------------------------------------------------

def _cube_groups(cubes: list[DyadicCube], box: Box, J: int) -> dict:
    """Cubes grouped by restriction shape and first level, with index arrays."""
    groups: dict = {}
    for Q in cubes:
        j0 = max(Q.j, 0)
        sl = Q.index_slices(box)
        if j0 > J or any(s.stop <= s.start for s in sl):
            continue
        key = (tuple(s.stop - s.start for s in sl), j0)
        groups.setdefault(key, []).append((Q, tuple(s.start for s in sl)))
    return groups


def _gather(arr: np.ndarray, starts: np.ndarray, lengths: tuple[int, ...]) -> np.ndarray:
    """``arr[..., cube window]`` for every cube: shape ``(C, leading..., prod(lengths))``."""
    lead = arr.ndim - len(lengths)
    if len(lengths) == 1:
        idx = starts[:, 0, None] + np.arange(lengths[0])
        g = arr[(Ellipsis, idx)]
    else:
        ix = (starts[:, 0, None] + np.arange(lengths[0]))[:, :, None]
        iy = (starts[:, 1, None] + np.arange(lengths[1]))[:, None, :]
        g = arr[(Ellipsis, ix, iy)]
    C = starts.shape[0]
    g = g.reshape(arr.shape[:lead] + (C, -1))
    return np.moveaxis(g, lead, 0)


def _phi_norm(fs: FunctionSequence, p, q, phi: SetFunction,
              cubes: Iterable[DyadicCube], batch, return_scan: bool):
    cubes = list(cubes)
    if not cubes:
        raise ValueError("empty cube list")
    box = fs.box
    pv, qv = _exp_values(p, box), _exp_values(q, box)
    a_all = fs.abs()
    J = fs.J
    best, rows = 0.0, []
    for (lengths, j0), members in _cube_groups(cubes, box, J).items():
        starts = np.array([m[1] for m in members])
        a = _gather(a_all[j0:], starts, lengths)
        vals = batch(a, _gather(pv, starts, lengths), _gather(qv, starts, lengths),
                     box.cell_volume)
        Qs = [m[0] for m in members]
        phis = phi(np.array([Q.center for Q in Qs]), np.array([Q.side for Q in Qs]))
        ratios = vals / phis
        best = max(best, float(ratios.max()))
        if return_scan:
            rows.extend({"j": Q.j, "k": Q.k, "level_start": j0, "norm": float(v),
                         "phi": float(f), "ratio": float(r)}
                        for Q, v, f, r in zip(Qs, vals, phis, ratios))
    if return_scan:
        rows.sort(key=lambda r: (r["j"], r["k"]))
        return best, rows
    return best


def phi_norm_B(fs: FunctionSequence, p, q, phi: SetFunction,
               cubes: Iterable[DyadicCube], return_scan: bool = False):
    """``sup_P phi(P)^{-1} || (f_j)_{j >= j_P v 0} | l_q(L_p(P)) ||``."""
    return _phi_norm(fs, p, q, phi, cubes, _lq_Lp_batch, return_scan)


def phi_norm_F(fs: FunctionSequence, p, q, phi: SetFunction,
               cubes: Iterable[DyadicCube], return_scan: bool = False):
    """``sup_P phi(P)^{-1} || (f_j)_{j >= j_P v 0} | L_p(l_q(P)) ||``."""
    pv, qv = _exp_values(p, fs.box), _exp_values(q, fs.box)
    if not (np.all(np.isfinite(pv)) and np.all(np.isfinite(qv))):
        raise ExponentError("L_p(l_q) needs bounded exponents p+, q+ < inf")
    return _phi_norm(fs, p, q, phi, cubes, _Lp_lq_batch, return_scan)


def scan_to_csv(rows: list[dict], path=None) -> str:
    """Cube scan report: cube index, level, restricted norm, phi(P), ratio."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "k", "level_start", "norm", "phi", "ratio"])
    for r in rows:
        w.writerow([r["j"], " ".join(map(str, r["k"])), r["level_start"],
                    repr(r["norm"]), repr(r["phi"]), repr(r["ratio"])])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
