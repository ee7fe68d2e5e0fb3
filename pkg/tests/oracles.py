"""Independent reference implementations used as test oracles.

Nothing here calls the package's norm machinery: Luxemburg norms and the
``l_q(L_p)`` semi-modular are solved with ``scipy.optimize.brentq``, cubes
are walked with plain loops, and convolutions are done with ``numpy.fft``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp


def modular(a, p, cell):
    a, p = np.asarray(a, float).ravel(), np.asarray(p, float).ravel()
    if np.any(a[np.isinf(p)] > 1):
        return math.inf
    fin = np.isfinite(p)
    return float(cell * np.sum(a[fin] ** p[fin]))


def _log_root(fn, lo=-60.0, hi=60.0):
    """Root in ``t`` of a decreasing ``fn(t)`` (expanding the bracket if needed)."""
    while fn(lo) <= 0:
        lo -= 20
    while fn(hi) > 0:
        hi += 20
    return brentq(fn, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)


def luxemburg(a, p, cell):
    """``inf{lam : rho_p(a/lam) <= 1}`` via the root of ``log rho_p(a e^{-t})``."""
    a = np.abs(np.asarray(a, float)).ravel()
    p = np.asarray(p, float).ravel()
    if not np.any(a > 0):
        return 0.0
    inf = np.isinf(p)
    floor = float(a[inf].max()) if np.any(inf & (a > 0)) else 0.0
    fin = np.isfinite(p) & (a > 0)
    if not np.any(fin):
        return floor
    af, pf = a[fin], p[fin]

    def g(t):
        return math.log(cell) + logsumexp(pf * (np.log(af) - t))

    return max(floor, math.exp(_log_root(g)))


def lq_Lp_plain(levels, p, q, cell):
    """``l_q(L_p)`` norm from the defining double infimum.

    The semi-modular is ``sum_j inf{lam : rho_p(f_j / lam^{1/q}) <= 1}``;
    each inner infimum and the outer ``mu`` are roots of monotone
    equations.  ``q = inf`` everywhere gives ``sup_j ||f_j||_p``.
    """
    levels = [np.abs(np.asarray(f, float)).ravel() for f in levels]
    p = np.asarray(p, float).ravel()
    q = np.asarray(q, float).ravel()
    if np.all(np.isinf(q)):
        return max(luxemburg(f, p, cell) for f in levels)
    if np.any(np.isinf(q)):
        raise ValueError("mixed finite/infinite q not supported by the oracle")

    def inner(f, log_mu):
        # inf lam with rho_p(f e^{-log_mu} lam^{-1/q}) <= 1, solved in log lam
        if not np.any(f > 0):
            return 0.0
        nz = f > 0
        lf, pp, qq = np.log(f[nz]) - log_mu, p[nz], q[nz]

        def g(s):
            return math.log(cell) + logsumexp(pp * (lf - s / qq))

        return math.exp(_log_root(g, -200.0, 200.0))

    def outer(log_mu):
        return math.log(sum(inner(f, log_mu) for f in levels))

    if not any(np.any(f > 0) for f in levels):
        return 0.0
    return math.exp(_log_root(outer))


def Lp_lq_plain(levels, p, q, cell):
    """``|| (sum_j |f_j|^q)^{1/q} | L_p ||`` for finite exponents."""
    F = np.stack([np.abs(np.asarray(f, float)).ravel() for f in levels])
    q = np.asarray(q, float).ravel()
    inner = np.sum(F ** q[None, :], axis=0) ** (1.0 / q)
    return luxemburg(inner, p, cell)


def band_levels(values, h, symbol0, symbol, J):
    """``phi_j * f`` for ``j <= J`` by FFT with the radial symbols (1-D)."""
    vals = np.asarray(values, float)
    xi = np.fft.fftfreq(vals.size, d=h)
    fh = np.fft.fft(vals)
    out = [np.fft.ifft(fh * symbol0((xi,))).real]
    for j in range(1, J + 1):
        out.append(np.fft.ifft(fh * symbol((xi * 2.0 ** -j,))).real)
    return np.array(out)


def constant_index_norm(values, L, s, tau, p, q, J, cube_range, symbol0, symbol,
                        family="B"):
    """Besov-type / Triebel-Lizorkin-type norm with constant indices (1-D).

    ``sup_P |P|^{-tau} || (2^{js} phi_j * f)_{j >= max(j_P, 0)} ||`` with the
    ``l_q(L_p(P))`` or ``L_p(l_q)(P)`` norm, written out with loops.
    """
    N = len(values)
    h = 2 * L / N
    x = -L + h * np.arange(N)
    lev = band_levels(values, h, symbol0, symbol, J)
    lev = np.abs(lev) * (2.0 ** (s * np.arange(J + 1)))[:, None]
    best = 0.0
    for jP in range(cube_range[0], cube_range[1] + 1):
        side = 2.0 ** -jP
        for k in range(math.floor(-L / side), math.ceil(L / side)):
            inside = (x >= k * side - 1e-12 * side) & (x < (k + 1) * side - 1e-12 * side)
            if not inside.any():
                continue
            j0 = max(jP, 0)
            if j0 > J:
                continue
            block = lev[j0:, inside]
            if family == "B":
                norms = (h * np.sum(block ** p, axis=1)) ** (1 / p)
                v = np.sum(norms ** q) ** (1 / q) if math.isfinite(q) else norms.max()
            else:
                g = np.sum(block ** q, axis=0) ** (1 / q)
                v = (h * np.sum(g ** p)) ** (1 / p)
            best = max(best, v / side ** tau)
    return best
