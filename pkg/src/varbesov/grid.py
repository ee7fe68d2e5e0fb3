"""Uniform periodic grids on boxes and the sampled-function substrate.

Every object in the package (functions, kernels, atoms, exponents) is a
:class:`GridFunction`: samples on the grid ``x = -L + k h`` (``h = 2L/N``)
of the box ``[-L, L)^n``.  Integrals are Riemann sums and convolutions are
periodic, computed with the FFT.

Fourier conventions
-------------------
The continuous transform is ``f^(xi) = int f(x) exp(-2 pi i x.xi) dx`` with
``xi`` in cycles per unit length.  :func:`spectrum` returns the Riemann-sum
approximation of ``f^`` on the grid frequencies ``m / (2L)``.
"""
from __future__ import annotations

import csv
import io
import struct
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Box",
    "GridError",
    "GridFunction",
    "make_grid_function",
    "convolve",
    "integrate",
    "finite_difference",
    "spectrum",
    "from_spectrum",
    "frequencies",
    "save_binary",
    "load_binary",
    "to_csv",
]


class GridError(ValueError):
    """Raised for invalid grids, box mismatches and non-finite samples."""


@dataclass(frozen=True)
class Box:
    """The box ``[-L, L)^n`` sampled with ``N`` points per axis.

    Parameters
    ----------
    n : int
        Dimension, 1 or 2.
    L : float
        Half-width.
    N : int
        Points per axis, a power of two and at least 8.
    """

    n: int
    L: float
    N: int

    def __post_init__(self):
        if self.n not in (1, 2):
            raise GridError(f"dimension must be 1 or 2, got {self.n}")
        if not self.L > 0:
            raise GridError(f"half-width must be positive, got {self.L}")
        N = int(self.N)
        if N < 8 or N & (N - 1):
            raise GridError(f"N must be a power of two >= 8, got {self.N}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def cell_volume(self) -> float:
        return self.h ** self.n

    @property
    def nyquist(self) -> float:
        """Largest resolved frequency (cycles per unit length)."""
        return 0.5 / self.h

    def axis(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.N)

    def coords(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays broadcast to the full grid shape (``ij`` indexing)."""
        ax = self.axis()
        if self.n == 1:
            return (ax,)
        return tuple(np.meshgrid(ax, ax, indexing="ij"))

    def radius(self) -> np.ndarray:
        return np.sqrt(sum(c ** 2 for c in self.coords()))

    def refined(self, factor: int = 2) -> "Box":
        return Box(self.n, self.L, self.N * factor)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a (complex or real) function on a :class:`Box`.

    ``values`` has shape ``box.shape``; the sample at multi-index ``k`` is the
    value at ``x = -L + k h``.  The array is made read-only.
    """

    box: Box
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.dtype.kind not in "fc":
            vals = vals.astype(float)
        if vals.size != self.box.N ** self.box.n:
            raise GridError(
                f"expected {self.box.N ** self.box.n} samples, got {vals.size}")
        vals = vals.reshape(self.box.shape)
        if not np.all(np.isfinite(vals)):
            idx = np.argwhere(~np.isfinite(vals))[0]
            x = tuple(-self.box.L + self.box.h * i for i in idx)
            raise GridError(f"non-finite sample at x={x}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    # arithmetic keeps the box; mismatched boxes are rejected
    def _other(self, other):
        if isinstance(other, GridFunction):
            _check_same_box(self, other)
            return other.values
        return other

    def __add__(self, other):
        return GridFunction(self.box, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GridFunction(self.box, self.values - self._other(other))

    def __rsub__(self, other):
        return GridFunction(self.box, self._other(other) - self.values)

    def __mul__(self, other):
        return GridFunction(self.box, self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return GridFunction(self.box, self.values / self._other(other))

    def __neg__(self):
        return GridFunction(self.box, -self.values)

    def __abs__(self):
        return GridFunction(self.box, np.abs(self.values))

    @property
    def real(self) -> "GridFunction":
        return GridFunction(self.box, self.values.real)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def is_real(self) -> bool:
        return self.values.dtype.kind == "f" or not np.any(self.values.imag)


def _check_same_box(f: GridFunction, g: GridFunction) -> None:
    if f.box != g.box:
        raise GridError(f"box mismatch: {f.box} vs {g.box}")


def make_grid_function(expr: Callable[..., np.ndarray] | float,
                       box: Box) -> GridFunction:
    """Sample ``expr`` at the grid nodes.

    ``expr`` is called with one coordinate array per axis (``expr(x)`` for
    n=1, ``expr(x, y)`` for n=2); a plain number gives a constant function.
    """
    if callable(expr):
        vals = np.asarray(expr(*box.coords()))
        vals = np.broadcast_to(vals, box.shape)
    else:
        vals = np.full(box.shape, expr)
    return GridFunction(box, vals)


def convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """Periodic convolution ``(f*g)(x) = h^n sum_y f(y) g(x - y)``.

    ``g`` is read as a function of position, so its origin sits at index
    ``N/2`` of each axis.
    """
    _check_same_box(f, g)
    axes = tuple(range(f.box.n))
    c = np.fft.ifftn(np.fft.fftn(f.values) * np.fft.fftn(g.values))
    c = np.roll(c, -f.box.N // 2, axis=axes) * f.box.cell_volume
    if f.is_real() and g.is_real():
        c = c.real
    return GridFunction(f.box, c)


def integrate(f: GridFunction) -> complex | float:
    """Riemann sum ``h^n sum f``."""
    s = f.box.cell_volume * np.sum(f.values)
    return complex(s) if np.iscomplexobj(s) else float(s)


def frequencies(box: Box) -> tuple[np.ndarray, ...]:
    """Grid frequencies (cycles), broadcast like :meth:`Box.coords`, in FFT order."""
    fr = np.fft.fftfreq(box.N, d=box.h)
    if box.n == 1:
        return (fr,)
    return tuple(np.meshgrid(fr, fr, indexing="ij"))


def _sign_pattern(box: Box) -> np.ndarray:
    s = (-1.0) ** np.arange(box.N)
    if box.n == 1:
        return s
    return np.multiply.outer(s, s)


def spectrum(f: GridFunction) -> np.ndarray:
    """Riemann-sum Fourier transform of ``f`` at :func:`frequencies` (FFT order)."""
    return f.box.cell_volume * np.fft.fftn(f.values) * _sign_pattern(f.box)


def from_spectrum(box: Box, fhat: np.ndarray, real: bool = True) -> GridFunction:
    """Inverse of :func:`spectrum`: the grid function whose spectrum is ``fhat``.

    With this kernel, ``convolve(f, g)`` multiplies ``spectrum(f)`` by ``fhat``.
    """
    vals = np.fft.ifftn(np.asarray(fhat) * _sign_pattern(box)) / box.cell_volume
    if real:
        vals = vals.real
    return GridFunction(box, vals)


# central difference stencils, second order
_STENCILS = {
    0: ((0,), (1.0,)),
    1: ((-1, 1), (-0.5, 0.5)),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
}
MAX_DERIVATIVE_ORDER = 4


def finite_difference(f: GridFunction, multi_index: Sequence[int]) -> GridFunction:
    """Discrete ``D^gamma f`` by second-order central differences.

    Periodic wraparound is used at the box edge, so only interior nodes are
    meaningful for non-periodic data.
    """
    gamma = tuple(int(g) for g in multi_index)
    if len(gamma) != f.box.n or any(g < 0 for g in gamma):
        raise GridError(f"multi-index {multi_index} does not match n={f.box.n}")
    if sum(gamma) > MAX_DERIVATIVE_ORDER:
        raise GridError(
            f"|gamma|={sum(gamma)} exceeds the finite-difference budget "
            f"{MAX_DERIVATIVE_ORDER}")
    vals = np.asarray(f.values)
    h = f.box.h
    for axis, order in enumerate(gamma):
        if order == 0:
            continue
        offsets, weights = _STENCILS[order]
        out = np.zeros_like(vals)
        for o, w in zip(offsets, weights):
            out = out + w * np.roll(vals, -o, axis=axis)
        vals = out / h ** order
    return GridFunction(f.box, vals)


def multi_indices(n: int, order: int) -> list[tuple[int, ...]]:
    """All multi-indices in ``N_0^n`` of length exactly ``order``."""
    return [g for g in product(range(order + 1), repeat=n) if sum(g) == order]


# serialization ---------------------------------------------------------

_HEADER = struct.Struct("<qqd")


def save_binary(f: GridFunction, path) -> None:
    """Flat layout: little-endian int64 n, int64 N, float64 L, then complex128 values."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(f.box.n, f.box.N, f.box.L))
        fh.write(np.ascontiguousarray(f.values, dtype="<c16").tobytes())


def load_binary(path) -> GridFunction:
    with open(path, "rb") as fh:
        n, N, L = _HEADER.unpack(fh.read(_HEADER.size))
        box = Box(int(n), float(L), int(N))
        vals = np.frombuffer(fh.read(), dtype="<c16").reshape(box.shape)
    if not np.any(vals.imag):
        vals = vals.real
    return GridFunction(box, vals)


def to_csv(f: GridFunction, path=None) -> str:
    """CSV with one row per node: coordinates, real part, imaginary part."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = ["x", "y"][: f.box.n]
    w.writerow(names + ["re", "im"])
    coords = [c.ravel() for c in f.box.coords()]
    vals = np.asarray(f.values, dtype=complex).ravel()
    for i in range(vals.size):
        w.writerow([repr(float(c[i])) for c in coords]
                   + [repr(float(vals[i].real)), repr(float(vals[i].imag))])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
