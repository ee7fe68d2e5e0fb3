"""Analysis kernels: admissible pairs, local means, eta-functions, Peetre maxima.

A :class:`KernelPair` produces the level kernels ``psi_0`` and
``psi_j(x) = 2^{jn} psi(2^j x)`` for ``j >= 1``.  Band-limited pairs are
stored by their Fourier symbols, so the dilation is exact in frequency;
compactly supported pairs are stored by an exact spatial profile, so the
dilation is exact in space.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .bump import bump, bump_derivative, smooth_step
from .grid import (Box, GridError, GridFunction, convolve, frequencies,
                   from_spectrum, integrate, multi_indices, spectrum)

__all__ = [
    "KernelPair",
    "LocalMeansPair",
    "make_admissible_pair",
    "make_shifted_pair",
    "make_local_means",
    "max_resolvable_level",
    "default_levels",
    "eta",
    "check_moments",
    "check_tauberian",
    "tauberian_scan",
    "peetre_maximal",
    "peetre_from_field",
    "kernel_dump_csv",
    "ADMISSIBLE_EPSILON",
    "ADMISSIBLE_K",
]

# flat radius of the low-pass symbol; any value in [1, 6/5) gives the
# required supports, positivity sets and telescoping
FLAT_RADIUS = 1.1
OUTER_RADIUS = 2.0
ADMISSIBLE_EPSILON = 6.0 / 5.0
ADMISSIBLE_K = 25.0 / 18.0
TAUBERIAN_FLOOR = 1e-8
MIN_ANNULUS_MODES = 16
PEETRE_BUDGET = {1: 4096, 2: 64}

Symbol = Callable[[tuple], np.ndarray]


def _radius_freq(xi: tuple) -> np.ndarray:
    return np.sqrt(sum(c * c for c in xi))


def max_resolvable_level(box: Box) -> int:
    """Largest ``j`` whose annulus ``|xi| <= 2^{j+1}`` fits below Nyquist."""
    return int(math.floor(math.log2(box.nyquist) + 1e-12)) - 1


def default_levels(box: Box) -> int:
    """Truncation level ``J = min(log2 N - 3, largest resolvable level)``."""
    return max(0, min(int(math.log2(box.N)) - 3, max_resolvable_level(box)))


@dataclass(frozen=True, eq=False)
class KernelPair:
    """A pair ``(psi_0, psi)`` with its level construction.

    Exactly one of ``symbol0/symbol`` (Fourier side, taking frequency tuples)
    or ``profile0/profile`` (space side, taking coordinate tuples) is used
    to build levels; ``psi0`` and ``psi`` are their grid samples.
    """

    box: Box
    psi0: GridFunction
    psi: GridFunction
    moment_order: int = 0
    epsilon: float | None = None
    k: float | None = None
    description: str = ""
    symbol0: Symbol | None = field(default=None, repr=False)
    symbol: Symbol | None = field(default=None, repr=False)
    profile0: Callable | None = field(default=None, repr=False)
    profile: Callable | None = field(default=None, repr=False)

    @property
    def band_limited(self) -> bool:
        return self.symbol is not None

    def level_symbol(self, j: int, box: Box | None = None) -> np.ndarray:
        """``psi_j^`` at the grid frequencies of ``box`` (FFT order)."""
        box = box or self.box
        xi = frequencies(box)
        if self.band_limited:
            if j == 0:
                return self.symbol0(xi)
            s = 2.0 ** (-j)
            return self.symbol(tuple(c * s for c in xi))
        return spectrum(self.level(j, box))

    def level(self, j: int, box: Box | None = None) -> GridFunction:
        """``psi_j`` sampled on ``box``."""
        box = box or self.box
        if self.band_limited:
            return from_spectrum(box, self.level_symbol(j, box))
        if j == 0:
            return GridFunction(box, self.profile0(box.coords()))
        s = 2.0 ** j
        return GridFunction(box, s ** box.n * self.profile(tuple(c * s for c in box.coords())))

    def apply(self, f: GridFunction, j: int) -> GridFunction:
        """``psi_j * f``."""
        if self.band_limited:
            out = from_spectrum(f.box, spectrum(f) * self.level_symbol(j, f.box), real=False)
            if f.is_real():
                out = out.real
            return out
        return convolve(f, self.level(j, f.box))

    def levels(self, f: GridFunction, J: int) -> np.ndarray:
        """Stacked ``(psi_j * f)_{j=0..J}``."""
        return np.stack([self.apply(f, j).values for j in range(J + 1)])


def _admissible_symbols(flat: float = FLAT_RADIUS):
    def low(xi):
        return smooth_step(_radius_freq(xi), flat, OUTER_RADIUS)

    def band(xi):
        return low(xi) - low(tuple(2 * c for c in xi))

    return low, band


def _check_annulus_resolution(box: Box) -> None:
    modes = 1.5 * 2 * box.L
    if modes < MIN_ANNULUS_MODES:
        raise GridError(
            f"annulus 1/2 <= |xi| <= 2 holds {modes:.1f} frequency modes per axis, "
            f"need {MIN_ANNULUS_MODES}; use a box with L >= {MIN_ANNULUS_MODES / 3:.3f}")
    if box.nyquist < OUTER_RADIUS:
        raise GridError(f"Nyquist {box.nyquist} below the outer radius {OUTER_RADIUS}")


def make_admissible_pair(box: Box, flat: float = FLAT_RADIUS) -> KernelPair:
    """The band-limited pair ``phi_0^ = step(|xi|)``, ``phi^(xi) = phi_0^(xi) - phi_0^(2 xi)``.

    ``phi_0^`` is 1 on ``|xi| <= flat`` and 0 on ``|xi| >= 2``.  The
    positivity sets are checked on the grid frequencies.
    """
    if not 1.0 <= flat < 1.2:
        raise GridError(f"flat radius must lie in [1, 6/5), got {flat}")
    _check_annulus_resolution(box)
    low, band = _admissible_symbols(flat)
    xi = frequencies(box)
    r = _radius_freq(xi)
    if np.any(band(xi)[(r >= 0.6) & (r <= 5 / 3)] <= 0):
        raise GridError("phi^ not positive on 3/5 <= |xi| <= 5/3")
    if np.any(low(xi)[r <= 5 / 3] <= 0):
        raise GridError("phi_0^ not positive on |xi| <= 5/3")
    psi0 = from_spectrum(box, low(xi))
    psi = from_spectrum(box, band(xi))
    return KernelPair(box, psi0, psi, moment_order=10 ** 6,
                      epsilon=ADMISSIBLE_EPSILON, k=ADMISSIBLE_K,
                      description=f"admissible pair, flat radius {flat}",
                      symbol0=low, symbol=band)


def make_shifted_pair(box: Box, shift, flat: float = FLAT_RADIUS) -> KernelPair:
    """The admissible pair translated in space: ``phi(x - x0)``, ``phi_0(x - x0)``.

    The symbols pick up the phase ``exp(-2 pi i x0.xi)``; the moduli, hence
    supports and positivity sets, are unchanged.
    """
    x0 = np.broadcast_to(np.asarray(shift, dtype=float), (box.n,))
    base = make_admissible_pair(box, flat)

    def phase(xi):
        return np.exp(-2j * np.pi * sum(a * c for a, c in zip(x0, xi)))

    def low(xi):
        return base.symbol0(xi) * phase(xi)

    def band(xi):
        return base.symbol(xi) * phase(xi)

    xi = frequencies(box)
    return KernelPair(box, from_spectrum(box, low(xi)), from_spectrum(box, band(xi)),
                      moment_order=base.moment_order, epsilon=base.epsilon, k=base.k,
                      description=f"admissible pair shifted by {tuple(x0)}",
                      symbol0=low, symbol=band)


# local means ------------------------------------------------------------

_BUMP_MASS = quad(lambda t: float(bump(np.array(t))), -1, 1, epsabs=0, epsrel=1e-13, limit=200)[0]


@dataclass(frozen=True, eq=False)
class LocalMeansPair(KernelPair):
    """Compactly supported pair ``(k_0, k = Delta^M k_0)`` with supports in ``d Q_{0,0}``."""

    d: float = 3.0
    N: int = 0
    M: int = 0

    @property
    def k0(self) -> GridFunction:
        return self.psi0

    @property
    def kk(self) -> GridFunction:
        return self.psi


def _local_means_profiles(d: float, n: int, M: int):
    half = d / 2.0
    c1 = 1.0 / (half * _BUMP_MASS)

    def factor(t, order):
        # d^order/dx^order of c1 * bump((x - 1/2)/half)
        return c1 * half ** (-order) * bump_derivative((t - 0.5) / half, order)

    def k0(coords):
        out = 1.0
        for c in coords:
            out = out * factor(c, 0)
        return out

    def k(coords):
        if M == 0:
            return k0(coords)
        if n == 1:
            return factor(coords[0], 2 * M)
        # Delta^M = sum_{a+b=M} binom(M, a) d^{2a}_x d^{2b}_y
        total = 0.0
        for a in range(M + 1):
            total = total + math.comb(M, a) * factor(coords[0], 2 * a) * factor(coords[1], 2 * (M - a))
        return total

    return k0, k


def make_local_means(d: float, N: int, box: Box, min_samples: int = 32) -> LocalMeansPair:
    """Local means supported in ``d Q_{0,0}`` with moment order ``N``.

    ``k_0`` is a normalized tensor-product bump centred at ``(1/2, ..., 1/2)``
    (so ``k_0^(0) = 1``) and ``k = Delta^M k_0`` with ``M = ceil(N/2)``,
    evaluated from the exact bump derivatives.  ``epsilon`` and ``k`` of the
    non-vanishing conditions come from :func:`tauberian_scan`.
    """
    if not d > 0:
        raise GridError(f"support factor d must be positive, got {d}")
    if N < 0:
        raise GridError(f"moment order must be non-negative, got {N}")
    if d / box.h < min_samples:
        raise GridError(
            f"supp k_0 spans {d / box.h:.1f} samples per axis, need {min_samples}")
    if 0.5 + d / 2 > box.L or 0.5 - d / 2 < -box.L:
        raise GridError(f"supp k_0 = [{0.5 - d / 2}, {0.5 + d / 2}] leaves the box")
    M = (N + 1) // 2
    p0, p = _local_means_profiles(d, box.n, M)
    k0 = GridFunction(box, np.broadcast_to(p0(box.coords()), box.shape))
    k = GridFunction(box, np.broadcast_to(p(box.coords()), box.shape))
    eps, kk = tauberian_scan(k0, k)
    return LocalMeansPair(box, k0, k, moment_order=2 * M, epsilon=eps, k=kk,
                          description=f"local means d={d}, N={N}, M={M}",
                          profile0=lambda c: np.broadcast_to(p0(c), c[0].shape),
                          profile=lambda c: np.broadcast_to(p(c), c[0].shape),
                          d=d, N=N, M=M)


def tauberian_scan(psi0: GridFunction, psi: GridFunction,
                   floor: float = 1e-6) -> tuple[float, float]:
    """``(epsilon, k)`` with ``|psi_0^| > floor`` on ``|xi| <= k eps`` and
    ``|psi^| > floor`` on ``eps/2 <= |xi| <= k eps`` over the grid frequencies.

    ``eps/2`` is placed at the smallest radius from which ``|psi^|`` stays
    above ``floor``; ``k`` is as large as allowed, capped at 2.
    """
    box = psi.box
    r = _radius_freq(frequencies(box)).ravel()
    a0 = np.abs(spectrum(psi0)).ravel()
    a = np.abs(spectrum(psi)).ravel()
    radii, inv = np.unique(r, return_inverse=True)
    m0 = np.full(radii.size, np.inf)
    m = np.full(radii.size, np.inf)
    np.minimum.at(m0, inv, a0)
    np.minimum.at(m, inv, a)
    ok0, ok = m0 > floor, m > floor
    bad0 = np.flatnonzero(~ok0)
    top0 = radii[bad0[0]] if bad0.size else np.inf
    good = np.flatnonzero(ok & (radii > 0))
    if good.size == 0:
        raise GridError("psi^ never exceeds the floor on the grid")
    lo_idx = good[0]
    after = np.flatnonzero(~ok[lo_idx:])
    top = radii[lo_idx + after[0]] if after.size else np.inf
    lo = radii[lo_idx]
    eps = 2 * lo
    upper = min(top0, top)
    # largest grid radius strictly inside the good range
    inside = radii[radii < upper]
    kmax = inside[-1] / eps if inside.size else 0.0
    if not kmax > 1.0:
        raise GridError(f"no Tauberian annulus: eps={eps}, upper radius {upper}")
    return float(eps), float(min(2.0, kmax))


# checks -----------------------------------------------------------------

def check_moments(psi: GridFunction | KernelPair, R: int, step: float = 0.05) -> float:
    """``max_{|gamma| < R} |int x^gamma psi(x) dx|`` (0 for ``R = 0``).

    A grid function is integrated against monomials directly; this is
    accurate for compactly supported kernels resolved well inside the box.
    A band-limited :class:`KernelPair` is checked on the Fourier side,
    ``int x^gamma psi = (i / 2 pi)^{|gamma|} D^gamma psi^(0)``, with central
    differences of width ``step`` on its exact symbol (box truncation of the
    slowly decaying spatial tail would otherwise dominate).
    """
    if isinstance(psi, KernelPair):
        if psi.band_limited:
            return _symbol_moments(psi.symbol, psi.box.n, R, step)
        psi = psi.psi
    worst = 0.0
    coords = psi.box.coords()
    for order in range(int(R)):
        for g in multi_indices(psi.box.n, order):
            mono = np.ones(psi.box.shape)
            for c, e in zip(coords, g):
                mono = mono * c ** e
            worst = max(worst, abs(integrate(psi * mono)))
    return worst


def _symbol_moments(symbol: Symbol, n: int, R: int, step: float) -> float:
    worst = 0.0
    for order in range(int(R)):
        for g in multi_indices(n, order):
            # tensor stencil of central differences, one factor per axis
            offs, wts = [np.zeros(1)], [np.ones(1)]
            for m in g:
                k = np.arange(m + 1)
                offs.append((m / 2 - k) * step)
                wts.append((-1.0) ** k * np.array([math.comb(m, i) for i in k]) / step ** m)
            grids = np.meshgrid(*offs[1:], indexing="ij")
            w = np.ones(grids[0].shape)
            for a, ww in enumerate(wts[1:]):
                shape = [1] * n
                shape[a] = ww.size
                w = w * ww.reshape(shape)
            val = np.sum(w * symbol(tuple(grids)))
            worst = max(worst, abs(val) / (2 * np.pi) ** order)
    return float(worst)


def check_tauberian(psi0: GridFunction, psi: GridFunction, eps: float, k: float,
                    floor: float = TAUBERIAN_FLOOR) -> bool:
    """Non-vanishing of ``psi_0^`` on the ball and of ``psi^`` on the annulus, sampled."""
    if not 1.0 < k <= 2.0:
        raise ValueError(f"k must lie in (1, 2], got {k}")
    r = _radius_freq(frequencies(psi.box))
    ball = r <= k * eps
    ann = (r >= eps / 2) & ball
    return bool(np.all(np.abs(spectrum(psi0))[ball] > floor)
                and np.all(np.abs(spectrum(psi))[ann] > floor))


def eta(nu: int, R: float, box: Box) -> GridFunction:
    """``eta_{nu,R}(x) = 2^{n nu} / (1 + 2^nu |x|)^R``.

    Any finite ``R`` is accepted on the bounded box; for ``R <= n`` the
    kernel is not integrable on the whole space and only the box truncation
    keeps it finite.
    """
    if not np.isfinite(R):
        raise ValueError(f"R must be finite, got {R}")
    return GridFunction(box, 2.0 ** (box.n * nu) / (1 + 2.0 ** nu * box.radius()) ** R)


# Peetre maximal functions ----------------------------------------------

def peetre_from_field(g: np.ndarray, box: Box, j: int, a: float,
                      chunk: int = 2 ** 22) -> np.ndarray:
    """``sup_y g(y) / (1 + 2^j |x - y|)^a`` over grid nodes (non-periodic distance)."""
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    if box.N > PEETRE_BUDGET[box.n]:
        raise GridError(
            f"Peetre sup is O(N^{2 * box.n}); N={box.N} exceeds the budget "
            f"{PEETRE_BUDGET[box.n]} for n={box.n}")
    g = np.abs(np.asarray(g, dtype=float)).ravel()
    pts = np.stack([c.ravel() for c in box.coords()], axis=1)
    keep = np.flatnonzero(g > 0)
    out = np.zeros(g.size)
    if keep.size == 0:
        return out.reshape(box.shape)
    lg = np.log(g[keep])
    py = pts[keep]
    rows = max(1, chunk // keep.size)
    s = 2.0 ** j
    for i0 in range(0, g.size, rows):
        px = pts[i0:i0 + rows]
        dist = np.sqrt(((px[:, None, :] - py[None, :, :]) ** 2).sum(axis=2))
        out[i0:i0 + rows] = np.exp((lg[None, :] - a * np.log1p(s * dist)).max(axis=1))
    return out.reshape(box.shape)


def peetre_maximal(f: GridFunction, psi_j: GridFunction, j: int, a: float) -> GridFunction:
    """``(psi_j^* f)_a(x) = sup_y |psi_j * f(y)| / (1 + |2^j (x - y)|)^a``.

    ``psi_j`` is the level kernel itself (already dilated).
    """
    g = np.abs(convolve(f, psi_j).values)
    return GridFunction(f.box, peetre_from_field(g, f.box, j, a))


def kernel_dump_csv(pair: KernelPair, j: int, path=None) -> str:
    """Spatial and spectral samples of ``psi_j``: ``x.., value, xi.., re, im``."""
    box = pair.box
    kern = pair.level(j)
    spec = np.fft.fftshift(pair.level_symbol(j))
    xi = [np.fft.fftshift(c) for c in frequencies(box)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = ["x", "y"][: box.n]
    w.writerow(names + ["value"] + ["xi_" + s for s in names] + ["re", "im"])
    coords = [c.ravel() for c in box.coords()]
    vals = np.asarray(kern.values).real.ravel()
    fr = [c.ravel() for c in xi]
    sv = np.asarray(spec, dtype=complex).ravel()
    for i in range(vals.size):
        w.writerow([repr(float(c[i])) for c in coords] + [repr(float(vals[i]))]
                   + [repr(float(c[i])) for c in fr]
                   + [repr(float(sv[i].real)), repr(float(sv[i].imag))])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
