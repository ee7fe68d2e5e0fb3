"""Hoelder norms, smooth and non-smooth atoms, sequence spaces and synthesis.

Scaled norms
------------
Atom conditions are stated for ``a_Q(2^{-nu} .)``.  By the chain rule the
order-``|gamma|`` derivatives of the rescaled function are
``2^{-nu |gamma|}`` times those of ``a_Q`` and an ``s``-Hoelder quotient of
the top derivatives scales by ``2^{-nu s}``; the functions below take that
``scale = nu`` instead of resampling.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .bump import bump_derivative, smooth_step
from .grid import (MAX_DERIVATIVE_ORDER, Box, GridError, GridFunction, convolve,
                   finite_difference, integrate, multi_indices)
from .kernels import LocalMeansPair
from .mixed import DyadicCube
from .spaces import SpaceParams, ThresholdError, space_norm, sequence_phi_norm, thresholds

__all__ = [
    "split_smoothness",
    "ck_norm",
    "holder_norm",
    "Atom",
    "CoefficientSequence",
    "make_smooth_atom",
    "probe_bank",
    "validate_nonsmooth_atom",
    "sequence_levels",
    "sequence_norm",
    "synthesize",
    "extract_coefficients",
    "local_means_atom",
    "kernel_atom_estimates",
    "multiplier_test",
    "multiply_atom",
    "MULTIPLIER_ATOM_CONSTANT",
    "random_coefficients",
    "synthesis_experiment",
    "atoms_to_json",
    "atoms_from_json",
]

NORMALIZATION_TARGET = 1.0 - 1e-7
# c' in "c' phim a / ||phim | C^rho||" is again an atom; one fixed value for all (K, L)
MULTIPLIER_ATOM_CONSTANT = 0.125


def split_smoothness(s: float) -> tuple[int, float]:
    """``s = floor(s)^- + {s}^+`` with ``{s}^+ in (0, 1]`` (``s > 0``)."""
    if s <= 0:
        raise ValueError(f"split needs s > 0, got {s}")
    k = math.ceil(s) - 1
    return k, s - k


def _derivatives(f: GridFunction, order: int) -> list[np.ndarray]:
    if order > MAX_DERIVATIVE_ORDER:
        raise GridError(
            f"derivative order {order} exceeds the finite-difference budget "
            f"{MAX_DERIVATIVE_ORDER}")
    return [np.asarray(finite_difference(f, g).values)
            for g in multi_indices(f.box.n, order)]


def ck_norm(f: GridFunction, k: int, scale: int = 0) -> float:
    """``sum_{|gamma| <= k} 2^{-scale |gamma|} sup |D^gamma f|`` by finite differences."""
    total = 0.0
    for order in range(k + 1):
        for d in _derivatives(f, order):
            total += 2.0 ** (-scale * order) * float(np.max(np.abs(d)))
    return total


def _quotient_sup(v: np.ndarray, box: Box, sigma: float, min_gap: float) -> float:
    """``sup |v(x) - v(y)| / |x - y|^sigma`` over node pairs with ``|x - y| >= min_gap``."""
    h = box.h
    best = 0.0
    # pairs with both points in the zero set contribute nothing, and a
    # quotient against a zero point is largest at the nearest one, so the
    # bounding box of the support plus a 2-node margin is enough
    nz = np.nonzero(v)
    if nz[0].size == 0:
        return 0.0
    v = v[tuple(slice(max(int(i.min()) - 2, 0), int(i.max()) + 3) for i in nz)]
    vmax = float(np.max(np.abs(v)))
    k0 = max(1, math.ceil(min_gap / h - 1e-9))
    if box.n == 1:
        # Lipschitz case: every shift k >= 2 chains into shifts 2 and 3
        # (k = 2a + 3b), so d in {2h, 3h} already attains the sup
        kmax = 3 if (sigma == 1.0 and k0 == 2) else v.size - 1
        for k in range(k0, min(kmax, v.size - 1) + 1):
            d = k * h
            if 2 * vmax / d ** sigma <= best:
                break
            best = max(best, float(np.max(np.abs(v[k:] - v[:-k]))) / d ** sigma)
        return best
    Nx, Ny = v.shape
    for kx in range(0, Nx):
        for ky in range(-Ny + 1, Ny):
            if kx == 0 and ky <= 0:
                continue
            d = h * math.hypot(kx, ky)
            if d < min_gap * (1 - 1e-12) or 2 * vmax / d ** sigma <= best:
                continue
            a = v[kx:, max(ky, 0):Ny + min(ky, 0)]
            b = v[:Nx - kx, max(-ky, 0):Ny - max(ky, 0)]
            best = max(best, float(np.max(np.abs(a - b))) / d ** sigma)
    return best


def holder_norm(f: GridFunction, s: float, scale: int = 0) -> float:
    """Discrete ``C^s`` (Hoelder-Zygmund type) norm, optionally of ``f(2^{-scale} .)``.

    ``s = 0`` gives the sup norm.  Otherwise, with ``s = k + sigma``
    (``k = floor(s)^-``, ``sigma = {s}^+``), the ``C^k`` norm plus, for every
    ``|gamma| = k``, the sup of ``|D^gamma f(x) - D^gamma f(y)| / |x-y|^sigma``
    over node pairs at distance at least ``2h``.
    """
    if s < 0:
        raise ValueError(f"s must be non-negative, got {s}")
    if s == 0:
        return float(np.max(np.abs(f.values)))
    k, sigma = split_smoothness(s)
    total = ck_norm(f, k, scale)
    for d in _derivatives(f, k):
        total += 2.0 ** (-scale * s) * _quotient_sup(d, f.box, sigma, 2 * f.box.h)
    return total


@dataclass(frozen=True, eq=False)
class Atom:
    """Atom values on the grid attached to a cube ``Q`` with ``l(Q) <= 1``."""

    cube: DyadicCube
    values: GridFunction
    K: float
    L: float
    kind: str = "smooth"
    generator: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cube.j < 0:
            raise GridError(f"atoms live on cubes with l(Q) <= 1, got j={self.cube.j}")
        if self.kind not in ("smooth", "non-smooth"):
            raise ValueError(f"unknown atom kind {self.kind!r}")

    @property
    def nu(self) -> int:
        return self.cube.j


def _dilate_mask(box: Box, cube: DyadicCube, a: float) -> np.ndarray:
    lo, hi = cube.dilate_bounds(a)
    m = np.ones(box.shape, bool)
    for c, l, u in zip(box.coords(), lo, hi):
        m &= (c >= l - 1e-12) & (c <= u + 1e-12)
    return m


def make_smooth_atom(Q: DyadicCube, K: int, L: int, box: Box, shape_seed: int = 0) -> Atom:
    """A ``[K, L]``-smooth atom: a bump profile in ``3Q``, normalized.

    For ``nu >= 1`` and ``L >= 1`` the profile is the order-``L`` derivative
    of a bump in every coordinate, so all moments of order ``< L`` vanish.
    The seed varies the profile width, sign and position inside ``3Q``.  The
    atom is scaled so that the larger of its discrete scaled ``C^K`` and
    ``C^K``-Hoelder norms equals ``1 - 1e-7``.
    """
    nu = Q.j
    if nu < 0:
        raise GridError("smooth atoms need l(Q) <= 1")
    if 3 * Q.side / box.h < 16:
        raise GridError(
            f"3Q spans {3 * Q.side / box.h:.1f} samples per side, need 16")
    lo, hi = Q.dilate_bounds(3.0)
    if np.any(lo < -box.L) or np.any(hi > box.L):
        raise GridError(f"3Q = [{lo}, {hi}) leaves the box")
    rng = np.random.default_rng(shape_seed)
    order = L if (nu >= 1 and L >= 1) else 0
    half = 1.5 * Q.side
    width = half * rng.uniform(0.75, 1.0)
    slack = half - width
    center = Q.center + rng.uniform(-slack, slack, size=box.n)
    sign = rng.choice([-1.0, 1.0])
    vals = sign * np.ones(box.shape)
    for c, x0 in zip(box.coords(), center):
        vals = vals * bump_derivative((c - x0) / width, order)
    raw = GridFunction(box, vals)
    size = max(ck_norm(raw, K, nu), holder_norm(raw, K, nu) if K > 0 else 0.0)
    if size == 0:
        raise GridError("atom profile vanishes on the grid")
    atom = raw * (NORMALIZATION_TARGET / size)
    gen = {"type": "smooth", "shape_seed": shape_seed, "order": order,
           "width": width, "center": [float(c) for c in center], "sign": sign}
    return Atom(Q, atom, float(K), float(L), "smooth", gen)


# probe bank for the duality condition --------------------------------------

def probe_bank(box: Box, center, L: float, seed: int = 0, size: int = 12) -> list[GridFunction]:
    """Fixed test functions around ``center`` for the duality condition.

    Polynomials of degree ``0..ceil(L)`` under a smooth cutoff, modulated
    gaussians, and seeded lacunary cosine sums of regularity just above ``L``.
    """
    c = np.broadcast_to(np.asarray(center, dtype=float), (box.n,))
    rel = [x - a for x, a in zip(box.coords(), c)]
    r = np.sqrt(sum(x * x for x in rel))
    cut = smooth_step(r, 1.0, 2.0)
    probes = []
    for m in range(int(math.ceil(L)) + 1):
        probes.append(rel[0] ** m * cut)
    for fr in (0.5, 1.0, 2.0, 4.0):
        probes.append(np.exp(-r * r / 2) * np.cos(2 * np.pi * fr * rel[0]))
    rng = np.random.default_rng(seed)
    kmax = max(1, int(math.log2(box.nyquist)) - 2)
    while len(probes) < size:
        phases = rng.uniform(0, 2 * np.pi, size=kmax + 1)
        total = 0.0
        for k in range(kmax + 1):
            arg = sum(x for x in rel) * 2.0 ** k * np.pi
            total = total + 2.0 ** (-k * (L + 0.25)) * np.cos(arg + phases[k])
        probes.append(total * cut)
    return [GridFunction(box, p) for p in probes[:size]]


def validate_nonsmooth_atom(a: Atom, K: float, L: float,
                            probes: Iterable[GridFunction] | None = None,
                            c_max: float = 1e3, reg_tol: float = 1e-9) -> dict:
    """Check the three non-smooth atom conditions; report-style.

    * support: largest ``|a|`` outside ``3Q`` (leakage, must be <= 1e-12 max|a|);
    * regularity: scaled ``C^K`` Hoelder norm <= 1 (+ ``reg_tol``);
    * duality: the smallest ``c`` with ``|int psi a| <= c 2^{-nu(L+n)} ||psi | C^L||``
      over the probe bank; it passes when ``c <= c_max``.
    """
    box, Q, nu = a.values.box, a.cube, a.nu
    vals = np.asarray(a.values.values)
    outside = ~_dilate_mask(box, Q, 3.0)
    scale = float(np.max(np.abs(vals)))
    leak = float(np.max(np.abs(vals[outside]))) if outside.any() else 0.0
    support_ok = leak <= 1e-12 * max(scale, 1e-300)
    reg = holder_norm(a.values, K, nu)
    reg_ok = reg <= 1.0 + reg_tol
    if probes is None:
        probes = probe_bank(box, Q.center, L)
    c = 0.0
    rows = []
    for psi in probes:
        pair = abs(integrate(psi * a.values))
        norm = holder_norm(psi, L)
        ci = pair / (2.0 ** (-nu * (L + box.n)) * norm) if norm > 0 else 0.0
        rows.append({"pairing": float(pair), "probe_norm": float(norm), "c": float(ci)})
        c = max(c, ci)
    dual_ok = c <= c_max
    return {"cube": [Q.j, list(Q.k)], "K": K, "L": L, "support_leak": leak,
            "support_ok": bool(support_ok), "regularity": reg, "regularity_ok": bool(reg_ok),
            "duality_c": c, "duality_ok": bool(dual_ok), "probes": rows,
            "passed": bool(support_ok and reg_ok and dual_ok)}


# coefficient sequences ------------------------------------------------------

@dataclass(eq=False)
class CoefficientSequence:
    """Finitely many coefficients ``t_Q`` on cubes with ``l(Q) <= 1``."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        for Q in self.coeffs:
            if Q.j < 0:
                raise GridError(f"coefficient on cube {Q} outside Q* (l(Q) > 1)")

    @property
    def max_level(self) -> int:
        return max((Q.j for Q in self.coeffs), default=0)

    def scaled(self, c: complex) -> "CoefficientSequence":
        return CoefficientSequence({Q: c * t for Q, t in self.coeffs.items()})

    def to_json(self) -> str:
        items = [{"j": Q.j, "k": list(Q.k), "re": float(np.real(t)), "im": float(np.imag(t))}
                 for Q, t in sorted(self.coeffs.items(), key=lambda kv: (kv[0].j, kv[0].k))]
        return json.dumps({"coefficients": items}, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CoefficientSequence":
        data = json.loads(text)
        out = {}
        for it in data["coefficients"]:
            t = complex(it["re"], it.get("im", 0.0))
            out[DyadicCube(int(it["j"]), tuple(int(v) for v in it["k"]))] = t if t.imag else t.real
        return cls(out)


def _node_index(box: Box, point: np.ndarray) -> tuple[int, ...]:
    idx = np.rint((np.asarray(point) + box.L) / box.h).astype(int)
    return tuple(int(i) for i in np.clip(idx, 0, box.N - 1))


def sequence_levels(t: CoefficientSequence, params: SpaceParams) -> np.ndarray:
    """The level functions ``g_nu = sum_m w_nu(2^{-nu} m) |t_{Q_num}| chi_{Q_num}``.

    The weight is evaluated at each cube's own corner (nearest grid node).
    """
    box = params.box
    J = t.max_level
    if J > params.w.J:
        raise GridError(f"coefficients reach level {J}, weights stop at {params.w.J}")
    g = np.zeros((J + 1,) + box.shape)
    for Q, val in t.coeffs.items():
        sl = Q.index_slices(box)
        w = params.w.data[(Q.j,) + _node_index(box, Q.corner)]
        g[(Q.j,) + sl] += w * abs(val)
    return g


def sequence_norm(t: CoefficientSequence, params: SpaceParams) -> float:
    """``||t | b||`` (B family) or ``||t | f||`` (F family)."""
    return float(sequence_phi_norm(sequence_levels(t, params), params))


def synthesize(t: CoefficientSequence, atoms: Mapping[DyadicCube, Atom],
               params: SpaceParams | None = None) -> GridFunction:
    """``f = sum_Q t_Q a_Q``.

    With ``params`` the atom parameters are checked against the synthesis
    conditions ``K > alpha2 + max{0, log2 c1~(phi)}`` and
    ``L > n / min{1, p-(, q-)} - n - alpha1``.
    """
    if not t.coeffs:
        raise ValueError("empty coefficient sequence")
    missing = [Q for Q in t.coeffs if Q not in atoms]
    if missing:
        raise KeyError(f"no atom for cube {missing[0]}")
    if params is not None:
        th = thresholds(params)
        for Q in t.coeffs:
            a = atoms[Q]
            if not a.K > th["atom_K"]:
                raise ThresholdError("atom K", th["atom_K"], a.K,
                                     "K > alpha2 + max{0, log2 c1~(phi)}")
            if not a.L > th["atom_L"]:
                raise ThresholdError("atom L", th["atom_L"], a.L,
                                     "L > n/min{1, p-(, q-)} - n - alpha1")
    first = next(iter(t.coeffs))
    box = atoms[first].values.box
    total = np.zeros(box.shape, dtype=complex if any(np.iscomplexobj(v) for v in t.coeffs.values())
                     else float)
    for Q, val in t.coeffs.items():
        total = total + val * np.asarray(atoms[Q].values.values)
    return GridFunction(box, total)


def local_means_atom(lm: LocalMeansPair, Q: DyadicCube, K: float, c: float | None = None) -> Atom:
    """``c 2^{-nu n} k_nu(x - 2^{-nu} m)``: a translated, rescaled local mean.

    It lives in ``d Q``; with ``d <= 3`` and ``L <= N + 1`` it is a
    non-smooth ``[K, L]``-atom.  ``c`` defaults to the value making the
    scaled ``C^K`` Hoelder norm ``1 - 1e-7``.
    """
    box = lm.box
    s = 2.0 ** Q.j
    shifted = tuple(s * (x - a) for x, a in zip(box.coords(), Q.corner))
    raw = GridFunction(box, lm.profile(shifted) if Q.j > 0 else lm.profile0(shifted))
    if c is None:
        c = NORMALIZATION_TARGET / holder_norm(raw, K, Q.j)
    return Atom(Q, raw * c, K=float(K), L=float(lm.N + 1), kind="non-smooth",
                generator={"type": "local-means", "d": lm.d, "N": lm.N, "c": float(c)})


def extract_coefficients(f: GridFunction, lm: LocalMeansPair, J: int) -> CoefficientSequence:
    """Heuristic coefficients ``t_{Q_num} = (k_nu * f)(2^{-nu} m)`` at cube corners.

    Only corners that are grid nodes inside the box are used.  This is not
    an exact decomposition; round-trip defects are reported, not asserted.
    """
    box = f.box
    if 2.0 ** (-J) < box.h * (1 - 1e-12):
        raise GridError(f"level {J} cubes are finer than the grid")
    out = {}
    for nu in range(J + 1):
        field_ = convolve(f, lm.level(nu)).values
        side = 2.0 ** (-nu)
        m_lo = math.ceil(-box.L / side)
        m_hi = math.floor((box.L - box.h) / side)
        ms = range(m_lo, m_hi + 1)
        for m in np.ndindex(*(len(ms),) * box.n):
            k = tuple(ms[i] for i in m)
            corner = side * np.asarray(k, dtype=float)
            idx = (corner + box.L) / box.h
            if np.any(np.abs(idx - np.rint(idx)) > 1e-9):
                continue
            val = field_[tuple(int(round(i)) for i in idx)]
            if val != 0:
                out[DyadicCube(nu, k)] = float(np.real(val)) if np.isrealobj(field_) else val
    return CoefficientSequence(out)


def kernel_atom_estimates(lm: LocalMeansPair, a: Atom, j_range: Iterable[int],
                          leak: float = 1e-10) -> dict:
    """Decay and support of ``k_j * a_Q`` level by level.

    For ``j >= nu`` the decay is compared with ``2^{-(j-nu)K}`` and the support
    with dilates of ``Q``; for ``j < nu`` with ``2^{-(nu-j)(L+n)}`` and dilates
    of ``2^{nu-j} Q``.  Fitted log2-slopes of the sup over each side are
    reported with the smallest constants making both bounds hold.
    """
    box, Q, nu = a.values.box, a.cube, a.nu
    n = box.n
    rows = []
    for j in j_range:
        fld = np.abs(convolve(a.values, lm.level(j)).values)
        sup = float(fld.max())
        mask = fld > leak * max(sup, 1e-300)
        base = Q.side if j >= nu else Q.side * 2.0 ** (nu - j)
        if mask.any():
            dist = np.max(np.stack([np.abs(c - x0) for c, x0 in zip(box.coords(), Q.center)]),
                          axis=0)
            dil = float(2 * dist[mask].max() / base)
        else:
            dil = 0.0
        rate = a.K if j >= nu else a.L + n
        bound = 2.0 ** (-(abs(j - nu)) * rate)
        rows.append({"j": j, "sup": sup, "decay_constant": sup / bound,
                     "support_dilate": dil})

    def slope(sel):
        if len(sel) < 2:
            return None
        js = np.array([r["j"] for r in sel], float)
        ls = np.log2([r["sup"] for r in sel])
        return float(np.polyfit(js, ls, 1)[0])

    up = [r for r in rows if r["j"] >= nu]
    down = [r for r in rows if r["j"] < nu]
    s_up, s_down = slope(up), slope(down)
    return {"nu": nu, "K": a.K, "L": a.L, "levels": rows,
            "rate_above": None if s_up is None else -s_up,
            "rate_below": None if s_down is None else s_down,
            "expected_above": a.K, "expected_below": a.L + n,
            "decay_constant": max(r["decay_constant"] for r in rows),
            "support_constant": max(r["support_dilate"] for r in rows)}


def multiplier_test(phim: GridFunction, rho: float, f: GridFunction, params: SpaceParams,
                    pair, check: bool = True) -> dict:
    """``space_norm(phim f) / (||phim | C^rho|| space_norm(f))``."""
    if check:
        th = thresholds(params)
        if not rho > th["multiplier_rho"]:
            raise ThresholdError("multiplier smoothness rho", th["multiplier_rho"], rho,
                                 "rho > max{alpha2, alpha2 + log2 c1~(phi), "
                                 "n/min{1,p-(,q-)} - n - alpha1}")
    hn = holder_norm(phim, rho)
    if not np.isfinite(hn):
        raise ValueError("multiplier has infinite Hoelder norm")
    num = space_norm(phim * f, params, pair)
    den = space_norm(f, params, pair)
    return {"rho": rho, "holder_norm": hn, "norm_product": num, "norm_f": den,
            "ratio": num / (hn * den) if den > 0 else None}


def multiply_atom(a: Atom, phim: GridFunction, rho: float,
                  c: float = MULTIPLIER_ATOM_CONSTANT) -> Atom:
    """``c phim a / ||phim | C^rho||``, a non-smooth ``[K, L]``-atom when ``rho >= max(K, L)``.

    Multiplication does not enlarge the support, and the Hoelder algebra
    bounds the regularity and duality conditions by the multiplier's norm.
    """
    if rho < max(a.K, a.L):
        raise ValueError(f"multiplier smoothness rho={rho} below max(K, L)={max(a.K, a.L)}")
    hn = holder_norm(phim, rho)
    if not (np.isfinite(hn) and hn > 0):
        raise ValueError("multiplier must have a finite, positive Hoelder norm")
    gen = {"type": "product", "base": a.generator, "rho": float(rho), "c": float(c)}
    return Atom(a.cube, a.values * phim * (c / hn), a.K, a.L, "non-smooth", gen)


def atoms_to_json(atoms: Iterable[Atom], inline: bool = True) -> str:
    """Atom bank layout: cube, kind, K, L, generator and (optionally) inline values."""
    items = []
    for a in atoms:
        it = {"j": a.cube.j, "k": list(a.cube.k), "kind": a.kind,
              "K": a.K if np.isfinite(a.K) else "inf", "L": a.L,
              "generator": a.generator,
              "box": [a.values.box.n, a.values.box.L, a.values.box.N]}
        if inline:
            it["values"] = [float(v) for v in np.asarray(a.values.values).real.ravel()]
        items.append(it)
    return json.dumps({"atoms": items}, sort_keys=True)


def atoms_from_json(text: str) -> list[Atom]:
    out = []
    for it in json.loads(text)["atoms"]:
        n, L, N = it["box"]
        box = Box(int(n), float(L), int(N))
        if "values" not in it:
            raise ValueError("atom bank entry without inline values")
        K = np.inf if it["K"] == "inf" else float(it["K"])
        out.append(Atom(DyadicCube(int(it["j"]), tuple(it["k"])),
                        GridFunction(box, np.asarray(it["values"], float)), K, float(it["L"]),
                        it["kind"], it.get("generator", {})))
    return out


def random_coefficients(box: Box, levels: Iterable[int], rng: np.random.Generator,
                        per_level: int = 3) -> CoefficientSequence:
    """Gaussian coefficients on ``per_level`` random cubes per level whose ``3Q`` fits the box."""
    out = {}
    for nu in levels:
        side = 2.0 ** (-nu)
        lo = math.ceil((-box.L + side) / side)
        hi = math.floor((box.L - 2 * side) / side)
        if hi < lo:
            raise GridError(f"no level-{nu} cube has 3Q inside the box")
        for _ in range(per_level):
            k = tuple(int(v) for v in rng.integers(lo, hi + 1, size=box.n))
            out[DyadicCube(nu, k)] = float(rng.standard_normal())
    return CoefficientSequence(out)


def synthesis_experiment(params: SpaceParams, pair, K: int, L: int, levels=range(5),
                         trials: int = 50, seed: int = 0, per_level: int = 3) -> dict:
    """Max of ``space_norm(sum t_Q a_Q) / sequence_norm(t)`` over seeded coefficient sets.

    Each set draws its coefficients and atom shapes from its own spawned seed.
    """
    ratios = []
    for ss in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(ss)
        t = random_coefficients(params.box, levels, rng, per_level)
        atoms = {Q: make_smooth_atom(Q, K, L, params.box, int(rng.integers(2 ** 31)))
                 for Q in t.coeffs}
        f = synthesize(t, atoms, params)
        ratios.append(space_norm(f, params, pair) / sequence_norm(t, params))
    return {"family": params.family, "K": K, "L": L, "trials": trials, "seed": seed,
            "max_ratio": float(max(ratios)), "min_ratio": float(min(ratios)),
            "ratios": [float(r) for r in ratios]}
