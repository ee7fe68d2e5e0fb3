import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from varbesov.exponents import (ExponentError, VariableExponent, check_log_holder_global,
                                check_log_holder_local, exponent_bounds, pair_plan)
from varbesov.grid import Box


def _exp(fn, box, g_inf=None):
    return VariableExponent.from_function(fn, box, g_inf=g_inf)


def test_positivity_enforced():
    box = Box(1, 1.0, 16)
    with pytest.raises(ExponentError):
        _exp(lambda x: x, box)


def test_bounds_examples():
    box = Box(1, 8.0, 512)
    assert exponent_bounds(VariableExponent.constant(box, 2.0)) == (2.0, 2.0)
    lo, hi = exponent_bounds(_exp(lambda x: 2 + np.sin(x) ** 2, box))
    assert abs(lo - 2) < 1e-3 and abs(hi - 3) < 1e-3
    b10 = Box(1, 10.0, 2048)
    lo, hi = exponent_bounds(_exp(lambda x: 3 + 1 / (1 + x * x), b10))
    dense = np.linspace(-10, 10, 200001)
    ref = 3 + 1 / (1 + dense ** 2)
    assert abs(lo - ref.min()) < 1e-4 and abs(hi - ref.max()) < 1e-4


def test_local_constant_and_critical_example():
    box = Box(1, 0.5, 512)
    assert check_log_holder_local(VariableExponent.constant(box, 3.0)) == 0.0
    g = _exp(lambda x: 1 + np.minimum(1.0, 1 / np.log(np.e + 1 / np.maximum(np.abs(x), 1e-300))), box)
    c = check_log_holder_local(g)
    assert 0.5 < c < 1.5


def test_local_estimate_grows_for_non_log_hoelder_exponent():
    # (log(e + 1/|x|))^{-1/2} is continuous but not log-Hoelder at 0
    def fn(x):
        return 1 + np.log(np.e + 1 / np.maximum(np.abs(x), 1e-300)) ** -0.5
    est = [check_log_holder_local(_exp(fn, Box(1, 0.5, N))) for N in (64, 128, 256, 512)]
    assert all(b > a for a, b in zip(est, est[1:]))


def test_sqrt_is_log_hoelder_so_estimate_stays_bounded():
    est = [check_log_holder_local(_exp(lambda x: 1 + np.sqrt(np.abs(x)), Box(1, 0.5, N)))
           for N in (64, 512)]
    assert est[1] < 1.5 * est[0]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_reciprocal_bounds(seed):
    rng = np.random.default_rng(seed)
    box = Box(1, 4.0, 128)
    a, f, ph = rng.uniform(0.1, 1.0), rng.uniform(0.2, 2.0), rng.uniform(0, 6)
    g = _exp(lambda x: 1.5 + a * np.sin(f * x + ph), box)
    cg, ci = check_log_holder_local(g), check_log_holder_local(g.reciprocal())
    lo, hi = g.p_minus, g.p_plus
    assert ci <= cg / lo ** 2 * (1 + 1e-12)
    assert cg <= ci * hi ** 2 * (1 + 1e-12)
    if lo <= 1 <= hi:
        # the (g+/g-)^2 form follows from the sharp bounds only when g- <= 1 <= g+
        assert max(ci / cg, cg / ci) <= (hi / lo) ** 2 * (1 + 1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_reciprocal_bounds_straddling_one(seed):
    rng = np.random.default_rng(seed)
    box = Box(1, 4.0, 128)
    # f >= 2 pi / 8 puts a full period in the box, so the range contains 1
    a, f = rng.uniform(0.05, 0.6), rng.uniform(0.8, 2.0)
    g = _exp(lambda x: 1 + a * np.cos(f * x), box)
    assert g.p_minus <= 1 <= g.p_plus
    cg, ci = check_log_holder_local(g), check_log_holder_local(g.reciprocal())
    assert max(ci / cg, cg / ci) <= (g.p_plus / g.p_minus) ** 2 * (1 + 1e-12)


def test_estimate_monotone_under_subsampling():
    box = Box(1, 4.0, 256)
    g = _exp(lambda x: 2 + np.cos(3 * x), box)
    i, j = pair_plan(box)
    full = check_log_holder_local(g, (i, j))
    rng = np.random.default_rng(0)
    sub = rng.choice(i.size, size=i.size // 10, replace=False)
    assert check_log_holder_local(g, (i[sub], j[sub])) <= full


def test_large_grids_use_seeded_subsampling():
    box = Box(1, 4.0, 1024)
    a = pair_plan(box, seed=3)
    b = pair_plan(box, seed=3)
    assert a[0].size == 10 ** 6 and np.array_equal(a[0], b[0]) and np.all(a[0] != a[1])


def test_global_examples():
    box = Box(1, 8.0, 512)
    assert check_log_holder_global(VariableExponent.constant(box, 2.0)) == 0.0
    g = _exp(lambda x: 2 + 1 / np.log(np.e + np.abs(x)), box, g_inf=2.0)
    assert abs(check_log_holder_global(g) - 1) < 1e-12
    wrong = [check_log_holder_global(_exp(lambda x: 2 + 1 / np.log(np.e + np.abs(x)),
                                          Box(1, L, 512)), 3.0) for L in (8.0, 64.0)]
    assert wrong[1] > wrong[0] * 1.3


def test_global_needs_limit():
    with pytest.raises(ExponentError):
        check_log_holder_global(_exp(lambda x: 2 + 0 * x, Box(1, 1.0, 8)))
