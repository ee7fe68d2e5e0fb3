"""Variable exponents and empirical log-Hoelder estimates.

An exponent is a positive sampled function; ``numpy.inf`` is the sentinel
for ``p(x) = infinity``.  Log-Hoelder "verification" is an estimate over a
finite set of sample pairs: growth under refinement certifies failure, a
stable value is only evidence of membership.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import Box, GridFunction

__all__ = [
    "ExponentError",
    "VariableExponent",
    "exponent_bounds",
    "check_log_holder_local",
    "check_log_holder_global",
    "pair_plan",
]

FULL_PAIR_LIMIT = 512
SUBSAMPLED_PAIRS = 10 ** 6


class ExponentError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class VariableExponent:
    """Positive exponent samples on ``box``; ``inf`` entries mean ``p(x) = infinity``.

    ``g_inf`` optionally records the limit at infinity used by the global
    log-Hoelder condition.
    """

    box: Box
    values: np.ndarray = field(repr=False)
    g_inf: float | None = None

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).reshape(self.box.shape)
        if np.any(np.isnan(vals)) or np.any(vals <= 0):
            raise ExponentError("exponent samples must be positive")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, box: Box, value: float) -> "VariableExponent":
        return cls(box, np.full(box.shape, float(value)), g_inf=float(value))

    @classmethod
    def from_function(cls, fn: Callable[..., np.ndarray], box: Box,
                      g_inf: float | None = None) -> "VariableExponent":
        vals = np.broadcast_to(np.asarray(fn(*box.coords()), dtype=float), box.shape)
        return cls(box, vals, g_inf=g_inf)

    @property
    def p_minus(self) -> float:
        return float(self.values.min())

    @property
    def p_plus(self) -> float:
        return float(self.values.max())

    @property
    def bounded(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    @property
    def is_constant(self) -> bool:
        return bool(np.all(self.values == self.values.flat[0]))

    def samples(self) -> GridFunction:
        if not self.bounded:
            raise ExponentError("unbounded exponent has no finite sample function")
        return GridFunction(self.box, self.values)

    def reciprocal(self) -> "VariableExponent":
        """``1/p`` (infinite samples are not allowed here)."""
        if not self.bounded:
            raise ExponentError("1/p of an exponent with infinite samples")
        g_inf = None if self.g_inf is None else 1.0 / self.g_inf
        return VariableExponent(self.box, 1.0 / self.values, g_inf=g_inf)

    def scaled(self, factor: float) -> "VariableExponent":
        """``p(.) / factor``; used for the r-power identities."""
        g_inf = None if self.g_inf is None else self.g_inf / factor
        return VariableExponent(self.box, self.values / factor, g_inf=g_inf)


def exponent_bounds(p: VariableExponent) -> tuple[float, float]:
    """``(p-, p+)`` over the grid samples."""
    return p.p_minus, p.p_plus


def _flat_coords(box: Box) -> np.ndarray:
    return np.stack([c.ravel() for c in box.coords()], axis=1)


def pair_plan(box: Box, seed: int = 0, max_pairs: int = SUBSAMPLED_PAIRS,
              full_limit: int = FULL_PAIR_LIMIT) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs ``(i, j)``, ``i != j``, into the flattened grid.

    All unordered pairs for ``n=1, N <= full_limit``; otherwise ``max_pairs``
    seeded random pairs.
    """
    M = box.N ** box.n
    if box.n == 1 and box.N <= full_limit:
        i, j = np.triu_indices(M, k=1)
        return i, j
    rng = np.random.default_rng(seed)
    i = rng.integers(0, M, size=max_pairs)
    j = rng.integers(0, M - 1, size=max_pairs)
    j = j + (j >= i)
    return i, j


def _local_estimate(vals: np.ndarray, pts: np.ndarray, i: np.ndarray,
                    j: np.ndarray, chunk: int = 2 ** 20) -> float:
    best = 0.0
    for s in range(0, i.size, chunk):
        ii, jj = i[s:s + chunk], j[s:s + chunk]
        d = np.sqrt(np.sum((pts[ii] - pts[jj]) ** 2, axis=1))
        v = np.abs(vals[ii] - vals[jj]) * np.log(np.e + 1.0 / d)
        if v.size:
            best = max(best, float(v.max()))
    return best


def check_log_holder_local(g: VariableExponent | GridFunction,
                           pairs: tuple[np.ndarray, np.ndarray] | None = None,
                           seed: int = 0) -> float:
    """Largest ``|g(x)-g(y)| log(e + 1/|x-y|)`` over the sampled pairs.

    This is the smallest constant making the local log-Hoelder inequality
    hold on the pair set.
    """
    vals = np.asarray(g.values, dtype=float).ravel()
    if not np.all(np.isfinite(vals)):
        raise ExponentError("log-Hoelder estimate needs finite samples")
    if pairs is None:
        pairs = pair_plan(g.box, seed=seed)
    return _local_estimate(vals, _flat_coords(g.box), *pairs)


def check_log_holder_global(g: VariableExponent | GridFunction, g_inf: float | None = None) -> float:
    """``max_x |g(x) - g_inf| log(e + |x|)`` over the grid."""
    if g_inf is None:
        g_inf = getattr(g, "g_inf", None)
        if g_inf is None:
            raise ExponentError("no limit value g_inf supplied")
    vals = np.asarray(g.values, dtype=float)
    return float(np.max(np.abs(vals - g_inf) * np.log(np.e + g.box.radius())))
