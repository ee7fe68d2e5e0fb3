import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from varbesov.grid import (Box, GridError, GridFunction, convolve, finite_difference,
                           from_spectrum, integrate, load_binary, make_grid_function, save_binary,
                           spectrum, to_csv)


def test_box_invariants():
    assert Box(1, 2.0, 8).h == 0.5
    for bad in [(1, 1.0, 4), (1, 1.0, 12), (1, -1.0, 8), (3, 1.0, 8)]:
        with pytest.raises(GridError):
            Box(*bad)


def test_make_grid_function_constants_and_sine():
    box = Box(1, 1.0, 8)
    assert np.all(make_grid_function(0.0, box).values == 0)
    assert np.all(make_grid_function(1.0, box).values == 1) and box.shape == (8,)
    b = Box(1, math.pi, 1024)
    f = make_grid_function(np.sin, b)
    assert np.max(np.abs(f.values - np.sin(b.axis()))) == 0


def test_non_finite_sample_names_coordinate():
    box = Box(1, 1.0, 8)
    with np.errstate(divide="ignore"), pytest.raises(GridError, match="x="):
        make_grid_function(lambda x: 1 / x, box)


def test_delta_is_convolution_identity():
    box = Box(1, 4.0, 64)
    rng = np.random.default_rng(0)
    f = GridFunction(box, rng.normal(size=64))
    d = np.zeros(64)
    d[32] = 1 / box.h              # x = 0 sits at index N/2
    out = convolve(f, GridFunction(box, d))
    assert np.max(np.abs(out.values - f.values)) < 1e-12


def test_indicator_convolution_is_triangle():
    box = Box(1, 8.0, 4096)
    x = box.axis()
    chi = np.where((x >= 0) & (x <= 1), 1.0, 0.0)
    chi[np.isclose(x, 0) | np.isclose(x, 1)] = 0.5       # trapezoid end weights
    f = GridFunction(box, chi)
    c = convolve(f, f).values
    tri = np.clip(1 - np.abs(x - 1), 0, None)
    for t in (0.25, 0.5, 1.0, 1.5, 1.75):
        i = int(round((t + box.L) / box.h))
        assert abs(c[i] - tri[i]) < 2 * box.h


def _direct(f, g, box):
    N = box.N
    out = np.zeros(box.shape, dtype=complex)
    if box.n == 1:
        for i in range(N):
            for k in range(N):
                out[i] += f[k] * g[(i - k + N // 2) % N]
    else:
        for i in np.ndindex(N, N):
            for k in np.ndindex(N, N):
                out[i] += f[k] * g[(i[0] - k[0] + N // 2) % N, (i[1] - k[1] + N // 2) % N]
    return out * box.cell_volume


@pytest.mark.parametrize("box", [Box(1, 3.0, 64), Box(2, 3.0, 8)])
def test_fft_matches_direct_sum(box):
    rng = np.random.default_rng(1)
    f = rng.normal(size=box.shape) + 1j * rng.normal(size=box.shape)
    g = rng.normal(size=box.shape)
    fast = convolve(GridFunction(box, f), GridFunction(box, g)).values
    slow = _direct(f, g, box)
    assert np.max(np.abs(fast - slow)) <= 1e-10 * np.max(np.abs(slow))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31), st.floats(-3, 3), st.floats(-3, 3))
def test_convolution_commutative_and_linear(seed, a, b):
    box = Box(1, 2.0, 32)
    rng = np.random.default_rng(seed)
    f, g, k = (GridFunction(box, rng.normal(size=32)) for _ in range(3))
    assert np.allclose(convolve(f, g).values, convolve(g, f).values, atol=1e-12)
    lhs = convolve(f * a + g * b, k).values
    rhs = a * convolve(f, k).values + b * convolve(g, k).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))


def test_integrate_examples():
    assert abs(integrate(make_grid_function(1.0, Box(1, 1.0, 64))) - 2) < 1e-12
    # the node set -L + kh is not symmetric; symmetrize through the mirror node
    box = Box(1, 1.0, 64)
    odd = make_grid_function(lambda x: x, box).values[1:]
    assert abs(box.h * odd.sum()) < 1e-12
    g = make_grid_function(lambda x: np.exp(-x * x), Box(1, 10.0, 4096))
    assert abs(integrate(g) - math.sqrt(math.pi)) < 1e-8


def test_parseval():
    box = Box(2, 4.0, 32)
    rng = np.random.default_rng(3)
    f = GridFunction(box, rng.normal(size=box.shape))
    lhs = integrate(abs(f) * abs(f))
    df = 1 / (2 * box.L)
    rhs = np.sum(np.abs(spectrum(f)) ** 2) * df ** box.n
    assert abs(lhs - rhs) <= 1e-10 * lhs


def test_spectrum_round_trip_and_gaussian_transform():
    box = Box(1, 8.0, 512)
    g = make_grid_function(lambda x: np.exp(-np.pi * x * x), box)
    from varbesov.grid import frequencies
    xi = frequencies(box)[0]
    assert np.max(np.abs(spectrum(g) - np.exp(-np.pi * xi * xi))) < 1e-12
    back = from_spectrum(box, spectrum(g))
    assert np.max(np.abs(back.values - g.values)) < 1e-12


def test_finite_differences():
    box = Box(1, 1.0, 256)
    f = make_grid_function(lambda x: x * x, box)
    d2 = finite_difference(f, (2,)).values[2:-2]
    assert np.max(np.abs(d2 - 2)) < 1e-6
    c = make_grid_function(3.0, box)
    for g in range(1, 5):
        assert np.max(np.abs(finite_difference(c, (g,)).values)) < 1e-9
    s = make_grid_function(np.sin, Box(1, math.pi, 512))
    err = np.max(np.abs(finite_difference(s, (1,)).values - np.cos(s.box.axis())))
    assert err < s.box.h ** 2
    with pytest.raises(GridError):
        finite_difference(s, (5,))


def test_finite_difference_mixed_2d():
    box = Box(2, 1.0, 64)
    f = make_grid_function(lambda x, y: x * x * y, box)
    d = finite_difference(f, (2, 1)).values[3:-3, 3:-3]
    assert np.max(np.abs(d - 2)) < 1e-9


def test_binary_and_csv_round_trip(tmp_path):
    box = Box(2, 1.5, 8)
    rng = np.random.default_rng(5)
    f = GridFunction(box, rng.normal(size=box.shape) + 1j * rng.normal(size=box.shape))
    p = tmp_path / "f.bin"
    save_binary(f, p)
    raw = p.read_bytes()
    assert raw[:24] == np.array([2, 8], "<i8").tobytes() + np.array([1.5], "<f8").tobytes()
    g = load_binary(p)
    assert g.box == box and np.array_equal(g.values, f.values)
    text = to_csv(make_grid_function(1.0, Box(1, 1.0, 8)))
    assert text.splitlines()[0] == "x,re,im" and len(text.splitlines()) == 9
