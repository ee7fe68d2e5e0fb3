"""Besov-type and Triebel-Lizorkin-type quasi-norms and their experiments.

A space norm is the ``phi``-modified mixed norm of ``(w_j (psi_j * f))_{j<=J}``:
``l_q^phi(L_p)`` for the B family and ``L_p^phi(l_q)`` for the F family.
The experiments compare kernels (equivalence), test convolution
inequalities with random sequences, and report empirical constants.
Constants are reported, never compared with theoretical values; the
assertions made elsewhere are finiteness and stability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .exponents import ExponentError, VariableExponent, check_log_holder_local
from .grid import Box, GridError, GridFunction, make_grid_function
from .kernels import (KernelPair, check_tauberian, default_levels, eta,
                      max_resolvable_level, peetre_from_field)
from .mixed import (DyadicCube, FunctionSequence, SetFunction,
                    check_set_function_class, default_cube_range,
                    enumerate_dyadic_cubes, phi_norm_B, phi_norm_F)
from .weights import WeightSequence, make_weight_sequence_from_smoothness

__all__ = [
    "ThresholdError",
    "SpaceParams",
    "Preset",
    "thresholds",
    "space_norm",
    "space_norm_variants",
    "sequence_phi_norm",
    "equivalence_experiment",
    "canonical_family",
    "sample_family",
    "random_sequence",
    "eta_conv_ratio",
    "discrete_conv_sequence",
    "discrete_conv_ratio",
    "B_PRESET",
    "F_PRESET",
]


class ThresholdError(ValueError):
    """A parameter does not exceed the lower bound a statement requires."""

    def __init__(self, name: str, bound: float, supplied: float, condition: str = ""):
        self.name, self.bound, self.supplied = name, bound, supplied
        extra = f" ({condition})" if condition else ""
        super().__init__(
            f"{name} must exceed {bound:.6g}{extra}; supplied {supplied:.6g}")


def _require(name: str, bound: float, supplied: float, condition: str = "") -> None:
    if not supplied > bound:
        raise ThresholdError(name, bound, supplied, condition)


@dataclass(frozen=True, eq=False)
class SpaceParams:
    """Everything a space norm needs besides ``f`` and the kernel pair."""

    box: Box
    p: VariableExponent
    q: VariableExponent
    w: WeightSequence
    phi: SetFunction
    J: int
    cube_plan: tuple[int, int]
    family: str = "B"

    def __post_init__(self):
        if self.family not in ("B", "F"):
            raise ValueError(f"family must be 'B' or 'F', got {self.family!r}")
        if self.family == "F" and not (self.p.bounded and self.q.bounded):
            raise ExponentError("the F family needs p+, q+ < inf")
        for name, e in (("p", self.p), ("q", self.q)):
            if e.box != self.box:
                raise GridError(f"exponent {name} lives on a different box")
        if self.w.box != self.box:
            raise GridError("weights live on a different box")
        if self.J < 0 or self.J > self.w.J:
            raise GridError(f"J={self.J} outside the weight levels 0..{self.w.J}")
        if self.phi.c1_tilde is None:
            check_set_function_class(self.phi, n=self.box.n)

    @cached_property
    def cubes(self) -> list[DyadicCube]:
        return enumerate_dyadic_cubes(self.box, *self.cube_plan)

    def with_family(self, family: str) -> "SpaceParams":
        return SpaceParams(self.box, self.p, self.q, self.w, self.phi, self.J,
                           self.cube_plan, family)

    @property
    def log2_c1_tilde(self) -> float:
        return self.phi.log2_c1_tilde


@dataclass(frozen=True)
class Preset:
    """A parameter set described by functions, so it can be sampled on any box.

    ``p``, ``q``, ``s`` take coordinate arrays; ``phi`` is either a float
    ``tau`` (meaning ``phi(Q) = |Q|^tau``) or a :class:`SetFunction`.
    """

    p: Callable
    q: Callable
    s: Callable
    phi: float | SetFunction = 0.0
    family: str = "B"
    name: str = ""

    def build(self, box: Box, J: int | None = None,
              cube_plan: tuple[int, int] | None = None, seed: int = 0) -> SpaceParams:
        J = default_levels(box) if J is None else J
        cube_plan = default_cube_range(box) if cube_plan is None else cube_plan
        p = VariableExponent.from_function(self.p, box)
        q = VariableExponent.from_function(self.q, box)
        s = make_grid_function(self.s, box)
        w = make_weight_sequence_from_smoothness(s, J, seed=seed)
        phi = (SetFunction.cube_power(self.phi, box.n)
               if isinstance(self.phi, (int, float)) else self.phi)
        return SpaceParams(box, p, q, w, phi, J, cube_plan, self.family)


B_PRESET = Preset(p=lambda x, *r: 2 + 0.5 * np.sin(x), q=lambda x, *r: 2 + 0.5 * np.cos(x),
                  s=lambda x, *r: 1 + 0.25 * np.sin(x), phi=0.1, family="B",
                  name="B: p=2+sin/2, q=2+cos/2, s=1+sin/4, |Q|^0.1")
F_PRESET = Preset(p=lambda x, *r: 2 + 0.5 * np.sin(x), q=lambda x, *r: 2 + 0.5 * np.cos(x),
                  s=lambda x, *r: 1 + 0.25 * np.sin(x), phi=0.1, family="F",
                  name="F: p=2+sin/2, q=2+cos/2, s=1+sin/4, |Q|^0.1")


# thresholds ---------------------------------------------------------------

def _clog_inv(q: VariableExponent) -> float:
    inv = np.where(np.isinf(q.values), 0.0, 1.0 / q.values)
    return check_log_holder_local(GridFunction(q.box, inv))


def thresholds(params: SpaceParams) -> dict:
    """Lower bounds (strict) that the characterization statements require.

    ``c_log(1/q)`` is the empirical estimate over the default pair plan.
    """
    n = params.box.n
    alpha, a1, a2 = params.w.params
    pm, qm = params.p.p_minus, params.q.p_minus
    lc = max(0.0, params.log2_c1_tilde)
    clog = _clog_inv(params.q)
    if params.family == "B":
        a = n / pm + clog + alpha + lc
        m = min(1.0, pm)
    else:
        a = n / min(pm, qm) + alpha + lc
        m = min(1.0, pm, qm)
    return {
        "c_log_inv_q": clog,
        "log2_c1_tilde": params.log2_c1_tilde,
        "peetre_a": a,
        "moment_order": a2 + lc,
        "atom_K": a2 + lc,
        "atom_L": n / m - n - a1,
        "multiplier_rho": max(a2, a2 + params.log2_c1_tilde, n / m - n - a1),
        "eta_R": n + clog + lc if params.family == "B" else n + lc,
        "discrete_D2": lc,
    }


# norms --------------------------------------------------------------------

def sequence_phi_norm(data: np.ndarray, params: SpaceParams, family: str | None = None,
                      return_scan: bool = False):
    """The family's ``phi``-modified mixed norm of a stacked sequence."""
    fs = FunctionSequence(params.box, data)
    family = family or params.family
    fn = phi_norm_B if family == "B" else phi_norm_F
    return fn(fs, params.p, params.q, params.phi, params.cubes, return_scan=return_scan)


def _weighted(levels: np.ndarray, params: SpaceParams) -> np.ndarray:
    return params.w.data[: params.J + 1] * levels


def space_norm(f: GridFunction, params: SpaceParams, pair: KernelPair,
               return_scan: bool = False):
    """``|| (w_j (psi_j * f))_{j<=J} ||`` in the family's ``phi``-modified mixed norm."""
    if f.box != params.box:
        raise GridError("f and the parameters live on different boxes")
    if params.J > max_resolvable_level(f.box) and pair.band_limited:
        raise GridError(
            f"level J={params.J} is not resolvable on {f.box} "
            f"(largest {max_resolvable_level(f.box)})")
    levels = pair.levels(f, params.J)
    return sequence_phi_norm(_weighted(levels, params), params, return_scan=return_scan)


def _check_pair(params: SpaceParams, pair: KernelPair, th: dict) -> None:
    _require("moment order R of psi", th["moment_order"], pair.moment_order,
             "R > alpha2 + max{0, log2 c1~(phi)}")
    if pair.epsilon is None or pair.k is None:
        raise ValueError("kernel pair carries no Tauberian parameters")
    if not check_tauberian(pair.psi0, pair.psi, pair.epsilon, pair.k):
        raise ValueError(
            f"Tauberian conditions fail for eps={pair.epsilon}, k={pair.k}")


def space_norm_variants(f: GridFunction, params: SpaceParams, pair: KernelPair,
                        a: float | None = None, variant: str = "convolution",
                        check: bool = True) -> float:
    """The space norm with ``psi_j * f`` or the Peetre maximal ``(psi_j^* f)_a``.

    With ``check`` the moment, Tauberian and ``a`` conditions are verified
    first; violations raise :class:`ThresholdError` naming both sides.
    """
    th = thresholds(params) if check else None
    if check:
        _check_pair(params, pair, th)
    if variant == "convolution":
        return space_norm(f, params, pair)
    if variant != "peetre":
        raise ValueError(f"unknown variant {variant!r}")
    if a is None:
        raise ValueError("the Peetre variant needs a")
    if check:
        bound = th["peetre_a"]
        _require("Peetre exponent a", bound, a,
                 "a > n/p- + c_log(1/q) + alpha + max{0, log2 c1~(phi)}" if params.family == "B"
                 else "a > n/min{p-, q-} + alpha + max{0, log2 c1~(phi)}")
    levels = pair.levels(f, params.J)
    maxed = np.stack([peetre_from_field(np.abs(levels[j]), f.box, j, a)
                      for j in range(params.J + 1)])
    return sequence_phi_norm(_weighted(maxed, params), params)


# test family ----------------------------------------------------------------

def _r2(*c):
    return sum(np.asarray(x) ** 2 for x in c)


def _shifted_r2(center):
    def r2(*c):
        return sum((np.asarray(x) - center) ** 2 for x in c)
    return r2


def _random_field(seed: int, band: float = 6.0, modes: int = 24):
    rng = np.random.default_rng(seed)
    freqs = rng.uniform(-band, band, size=(modes, 2))
    amps = rng.normal(size=modes) / math.sqrt(modes)
    phases = rng.uniform(0, 2 * np.pi, size=modes)

    def f(*c):
        arg = 0.0
        total = 0.0
        for m in range(modes):
            arg = sum(freqs[m, a] * c[a] for a in range(len(c)))
            total = total + amps[m] * np.cos(2 * np.pi * arg + phases[m])
        return total * np.exp(-_r2(*c) / 8)
    return f


def canonical_family() -> list[tuple[str, Callable]]:
    """The fixed 20-function test family (dimension-generic callables)."""
    from .bump import smooth_step
    fam: list[tuple[str, Callable]] = []
    for sig in (0.25, 0.5, 1.0):
        fam.append((f"gauss sigma={sig}",
                    lambda *c, s=sig: np.exp(-_r2(*c) / (2 * s * s))))
    for ctr in (1.5, -2.25, 3.7):
        fam.append((f"gauss at {ctr}",
                    lambda *c, r2=_shifted_r2(ctr): np.exp(-r2(*c) / 0.5)))
    for fr in (1.5, 4.0):
        fam.append((f"modulated gauss freq={fr}",
                    lambda *c, v=fr: np.exp(-_r2(*c) / 2) * np.cos(2 * np.pi * v * c[0])))
    for wd in (1.0, 3.0):
        fam.append((f"mollified indicator width={wd}",
                    lambda *c, w=wd: smooth_step(np.sqrt(_r2(*c)), w - 0.5, w + 0.5)))
    fam.append(("chirp", lambda *c: np.exp(-_r2(*c) / 8)
                * np.cos(2 * np.pi * (0.5 * c[0] + 0.35 * c[0] ** 2))))
    for seed in range(9):
        fam.append((f"random band-limited field seed={seed}", _random_field(seed)))
    return fam


def sample_family(box: Box, family=None) -> list[GridFunction]:
    family = canonical_family() if family is None else family
    return [make_grid_function(fn, box) for _, fn in family]


# equivalence ---------------------------------------------------------------

def _ratios(fns, params, pair_a, pair_b):
    rows = []
    for name, fn in fns:
        f = make_grid_function(fn, params.box)
        na, nb = space_norm(f, params, pair_a), space_norm(f, params, pair_b)
        rows.append({"name": name, "norm_a": na, "norm_b": nb,
                     "ratio": nb / na if na > 0 and nb > 0 else None})
    good = [r["ratio"] for r in rows if r["ratio"] is not None]
    spread = max(good) / min(good) if good else None
    return rows, spread


def equivalence_experiment(preset: Preset, make_pair_a: Callable[[Box], KernelPair],
                           make_pair_b: Callable[[Box], KernelPair], box: Box,
                           family=None, refine: bool = True, seed: int = 0) -> dict:
    """Per-function ratios ``norm_b / norm_a`` and their spread (max/min).

    With ``refine`` the experiment is repeated on ``N -> 2N`` keeping ``J`` and
    the cube plan fixed; the relative change of the spread is reported.
    Functions with a zero norm are excluded from the ratios and listed.
    """
    family = canonical_family() if family is None else family
    params = preset.build(box, seed=seed)
    rows, spread = _ratios(family, params, make_pair_a(box), make_pair_b(box))
    report = {
        "box": [box.n, box.L, box.N], "J": params.J, "cube_plan": list(params.cube_plan),
        "family": params.family, "items": rows, "spread": spread,
        "excluded": [r["name"] for r in rows if r["ratio"] is None],
    }
    if refine:
        fine = box.refined()
        fparams = preset.build(fine, J=params.J, cube_plan=params.cube_plan, seed=seed)
        frows, fspread = _ratios(family, fparams, make_pair_a(fine), make_pair_b(fine))
        report["refined"] = {"box": [fine.n, fine.L, fine.N], "items": frows,
                             "spread": fspread}
        report["spread_change"] = (abs(fspread - spread) / spread
                                   if spread and fspread else None)
    return report


# convolution inequalities ---------------------------------------------------

def random_sequence(box: Box, J: int, rng: np.random.Generator,
                    bumps: int = 3) -> np.ndarray:
    """Non-negative levels: a few bumps of width about ``2^-nu`` per level."""
    coords = box.coords()
    out = np.zeros((J + 1,) + box.shape)
    for nu in range(J + 1):
        for _ in range(bumps):
            c = rng.uniform(-box.L / 2, box.L / 2, size=box.n)
            width = 2.0 ** (-nu) * rng.uniform(0.5, 2.0)
            amp = rng.lognormal(0.0, 1.0)
            r2 = sum((x - a) ** 2 for x, a in zip(coords, c))
            out[nu] += amp * np.exp(-r2 / (2 * width * width))
    return out


def eta_conv_ratio(params: SpaceParams, R: float, trials: int = 100, seed: int = 0,
                   check: bool = True) -> dict:
    """Largest ``||(eta_{nu,R} * f_nu)|| / ||(f_nu)||`` over seeded random sequences.

    The norm is the family's ``phi``-modified mixed norm.  ``check`` enforces
    the lower bound on ``R`` and ``p- >= 1``.
    """
    from .grid import convolve
    if check:
        th = thresholds(params)
        _require("eta decay R", th["eta_R"], R,
                 "R > n + c_log(1/q) + max{0, log2 c1~(phi)}" if params.family == "B"
                 else "R > n + max{0, log2 c1~(phi)}")
        if params.p.p_minus < 1 or (params.family == "F" and params.q.p_minus < 1):
            raise ThresholdError("p-", 1.0, params.p.p_minus, "p- >= 1 required")
    box = params.box
    etas = [eta(nu, R, box) for nu in range(params.J + 1)]
    ratios = []
    for rng in _split(seed, trials):
        g = random_sequence(box, params.J, rng)
        conv = np.stack([convolve(GridFunction(box, g[nu]), etas[nu]).values
                         for nu in range(params.J + 1)])
        ratios.append(sequence_phi_norm(conv, params) / sequence_phi_norm(g, params))
    return {"R": R, "trials": trials, "seed": seed, "max_ratio": max(ratios),
            "ratios": ratios}


def discrete_conv_sequence(g: np.ndarray, D1: float, D2: float) -> np.ndarray:
    """``G_j = sum_{nu<=j} 2^{-(j-nu) D2} g_nu + sum_{nu>j} 2^{-(nu-j) D1} g_nu``."""
    J = g.shape[0] - 1
    j = np.arange(J + 1)[:, None]
    nu = np.arange(J + 1)[None, :]
    M = np.where(nu <= j, 2.0 ** (-(j - nu) * D2), 2.0 ** (-(nu - j) * D1))
    return np.tensordot(M, g, axes=(1, 0))


def discrete_conv_ratio(params: SpaceParams, D1: float, D2: float, trials: int = 100,
                        seed: int = 0, check: bool = True) -> dict:
    """Largest ``||(G_j)|| / ||(g_nu)||`` in both ``phi``-modified mixed norms."""
    if check:
        _require("D1", 0.0, D1, "D1 > 0")
        _require("D2", thresholds(params)["discrete_D2"], D2, "D2 > max{0, log2 c1~(phi)}")
    rb, rf = [], []
    for rng in _split(seed, trials):
        g = random_sequence(params.box, params.J, rng)
        G = discrete_conv_sequence(g, D1, D2)
        rb.append(sequence_phi_norm(G, params, "B") / sequence_phi_norm(g, params, "B"))
        rf.append(sequence_phi_norm(G, params, "F") / sequence_phi_norm(g, params, "F"))
    return {"D1": D1, "D2": D2, "trials": trials, "seed": seed,
            "max_ratio_B": max(rb), "max_ratio_F": max(rf), "ratios_B": rb, "ratios_F": rf}


def _split(seed: int, trials: int) -> list[np.random.Generator]:
    """One independent generator per trial, so results do not depend on order."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]
