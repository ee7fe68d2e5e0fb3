"""Admissible weight sequences ``w = (w_j)_{j<=J}`` and empirical class checks.

The class has two conditions:

(i)  ``w_j(x) <= c w_j(y) (1 + 2^j |x - y|)^alpha`` for all ``j, x, y``;
(ii) ``2^{alpha1} w_j(x) <= w_{j+1}(x) <= 2^{alpha2} w_j(x)``.

Both are verified over finite sample sets only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exponents import ExponentError, VariableExponent, _flat_coords, pair_plan
from .grid import Box, GridError, GridFunction

__all__ = [
    "WeightSequence",
    "make_weight_sequence_from_smoothness",
    "make_weight_sequence",
    "check_admissible_weights",
    "weight_shift_constants",
    "CONDITION_I_CONSTANT",
]

CONDITION_I_CONSTANT = 1.05


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Positive levels ``w_0..w_J`` with declared ``(alpha, alpha1, alpha2)``."""

    box: Box
    data: np.ndarray = field(repr=False)
    alpha: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __post_init__(self):
        d = np.array(self.data, dtype=float).reshape((-1,) + self.box.shape)
        if not np.all(np.isfinite(d)) or np.any(d <= 0):
            raise GridError("weights must be finite and positive")
        d.flags.writeable = False
        object.__setattr__(self, "data", d)

    @property
    def J(self) -> int:
        return self.data.shape[0] - 1

    def level(self, j: int) -> GridFunction:
        return GridFunction(self.box, self.data[j])

    def truncated(self, J: int) -> "WeightSequence":
        if J > self.J:
            raise GridError(f"weights known up to level {self.J}, asked for {J}")
        return WeightSequence(self.box, self.data[:J + 1], self.alpha,
                              self.alpha1, self.alpha2)

    @property
    def params(self) -> tuple[float, float, float]:
        return self.alpha, self.alpha1, self.alpha2


def make_weight_sequence_from_smoothness(s: VariableExponent | GridFunction, J: int,
                                         alpha: float | None = None,
                                         seed: int = 0) -> WeightSequence:
    """``w_j(x) = 2^{j s(x)}`` with ``alpha1 = s-`` and ``alpha2 = s+``.

    ``s`` may be a plain real grid function (zero or negative smoothness is
    allowed).  ``alpha`` defaults to the empirical condition (i) estimate
    from :func:`check_admissible_weights`.
    """
    vals = np.asarray(s.values, dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ExponentError("weights 2^{js} need a bounded smoothness exponent")
    j = np.arange(J + 1, dtype=float).reshape((-1,) + (1,) * s.box.n)
    data = np.exp2(j * vals[None])
    lo, hi = float(vals.min()), float(vals.max())
    if alpha is None:
        alpha = check_admissible_weights(WeightSequence(s.box, data), seed=seed)[0]
    return WeightSequence(s.box, data, alpha, lo, hi)


def make_weight_sequence(fn: Callable[..., np.ndarray], box: Box, J: int,
                         seed: int = 0) -> WeightSequence:
    """Weights from ``fn(j, *coords)``; parameters taken from the empirical check."""
    data = np.stack([np.broadcast_to(np.asarray(fn(j, *box.coords()), float), box.shape)
                     for j in range(J + 1)])
    w = WeightSequence(box, data)
    a, a1, a2 = check_admissible_weights(w, seed=seed)
    return WeightSequence(box, data, a, a1, a2)


def check_admissible_weights(w: WeightSequence, pairs=None, seed: int = 0,
                             c: float = CONDITION_I_CONSTANT,
                             chunk: int = 2 ** 19) -> tuple[float, float, float]:
    """Empirical ``(alpha, alpha1, alpha2)``.

    ``alpha1``/``alpha2`` are the extreme values of ``log2(w_{j+1}/w_j)``;
    ``alpha`` is the smallest exponent making condition (i) hold with the
    constant ``c`` over the pair plan and every level.  With a single
    level, ``alpha1 = alpha2 = 0``.
    """
    if np.any(w.data <= 0):
        raise GridError("non-positive weight")
    lw = np.log(w.data.reshape(w.J + 1, -1))
    if w.J >= 1:
        growth = (lw[1:] - lw[:-1]) / math.log(2.0)
        a1, a2 = float(growth.min()), float(growth.max())
    else:
        a1 = a2 = 0.0
    if pairs is None:
        pairs = pair_plan(w.box, seed=seed)
    i, k = pairs
    pts = _flat_coords(w.box)
    logc = math.log(c)
    alpha = 0.0
    for s in range(0, i.size, chunk):
        ii, kk = i[s:s + chunk], k[s:s + chunk]
        d = np.sqrt(np.sum((pts[ii] - pts[kk]) ** 2, axis=1))
        for j in range(w.J + 1):
            excess = np.abs(lw[j, ii] - lw[j, kk]) - logc
            need = excess / np.log1p(2.0 ** j * d)
            alpha = max(alpha, float(need.max()))
    return max(alpha, 0.0), a1, a2


def weight_shift_constants(w: WeightSequence, seed: int = 0,
                           n_points: int = 256) -> tuple[float, float]:
    """Empirical constants of the two level-shift bounds.

    Upward: ``w_j(x) <= C 2^{(j-nu) alpha2} w_nu(2^-nu k) (1 + 2^nu |x - 2^-nu k|)^alpha``
    for ``j >= nu``.  Downward: ``w_j(x) <= C 2^{-(nu-j) alpha1} w_nu(2^-nu k)
    (1 + 2^j |x - 2^-nu k|)^alpha`` for ``nu > j``.  Only anchors ``2^-nu k`` that
    are grid nodes are used.  Returns ``(C_up, C_down)``.
    """
    box = w.box
    alpha, a1, a2 = w.params
    rng = np.random.default_rng(seed)
    pts = _flat_coords(box)
    M = pts.shape[0]
    xs = rng.choice(M, size=min(n_points, M), replace=False)
    lw = np.log(w.data.reshape(w.J + 1, -1))
    c_up = c_down = 0.0
    for nu in range(w.J + 1):
        step = 2.0 ** (-nu) / box.h
        if abs(step - round(step)) > 1e-9 or step < 1:
            continue
        stride = int(round(step))
        # node -L + i h equals 2^-nu k exactly when i h = L mod 2^-nu
        off = (box.L % 2.0 ** (-nu)) / box.h
        if abs(off - round(off)) > 1e-9:
            continue
        idx1 = np.arange(int(round(off)) % stride, box.N, stride)
        if box.n == 1:
            anchors = idx1
        else:
            anchors = (idx1[:, None] * box.N + idx1[None, :]).ravel()
        d = np.sqrt(np.sum((pts[xs][:, None, :] - pts[anchors][None, :, :]) ** 2, axis=2))
        anchor_lw = lw[nu, anchors][None, :]
        for j in range(w.J + 1):
            lx = lw[j, xs][:, None]
            if j >= nu:
                rhs = (j - nu) * a2 * math.log(2) + anchor_lw + alpha * np.log1p(2.0 ** nu * d)
                c_up = max(c_up, float(np.exp(lx - rhs).max()))
            else:
                rhs = -(nu - j) * a1 * math.log(2) + anchor_lw + alpha * np.log1p(2.0 ** j * d)
                c_down = max(c_down, float(np.exp(lx - rhs).max()))
    return c_up, c_down
