import math

import numpy as np
import pytest

from oracles import Lp_lq_plain, constant_index_norm, lq_Lp_plain
from varbesov.grid import Box, GridError, GridFunction, make_grid_function
from varbesov.kernels import make_admissible_pair, make_local_means, make_shifted_pair
from varbesov.spaces import (B_PRESET, F_PRESET, Preset, ThresholdError, canonical_family,
                             discrete_conv_ratio, discrete_conv_sequence, eta_conv_ratio,
                             equivalence_experiment, random_sequence, sample_family,
                             sequence_phi_norm, space_norm, space_norm_variants, thresholds)

BOX = Box(1, 8.0, 512)


@pytest.fixture(scope="module")
def pair():
    return make_admissible_pair(BOX)


@pytest.fixture(scope="module", params=["B", "F"])
def params(request):
    return (B_PRESET if request.param == "B" else F_PRESET).build(BOX)


def _gauss(box=BOX, c=0.0, s=1.0):
    return make_grid_function(lambda x: np.exp(-((x - c) / s) ** 2), box)


def test_zero_and_homogeneity(params, pair):
    assert space_norm(make_grid_function(0.0, BOX), params, pair) == 0.0
    for name, fn in canonical_family()[::4]:
        f = make_grid_function(fn, BOX)
        base = space_norm(f, params, pair)
        for c in (-2.5, 0.1):
            assert abs(space_norm(f * c, params, pair) - abs(c) * base) <= 1e-12 * abs(c) * base


@pytest.mark.parametrize("family", ["B", "F"])
@pytest.mark.parametrize("p,q,s,tau", [(2.0, 2.0, 1.0, 0.1), (1.5, 3.0, 0.5, 0.25),
                                       (3.0, 1.2, 1.5, 0.0)])
def test_constant_index_matches_oracle(pair, family, p, q, s, tau):
    pre = Preset(p=lambda x: p + 0 * x, q=lambda x: q + 0 * x, s=lambda x: s + 0 * x,
                 phi=tau, family=family)
    P = pre.build(BOX)
    for name, fn in canonical_family()[::3]:
        f = make_grid_function(fn, BOX)
        got = space_norm(f, P, pair)
        ref = constant_index_norm(f.values, BOX.L, s, tau, p, q, P.J, P.cube_plan,
                                  pair.symbol0, pair.symbol, family)
        assert abs(got - ref) <= 1e-6 * ref, name


def test_phi_one_equals_plain_mixed_norms():
    # sequences supported in [0, L) fit in one dyadic cube of side L
    pre = Preset(p=B_PRESET.p, q=B_PRESET.q, s=B_PRESET.s, phi=0.0)
    P = pre.build(BOX)
    x = np.asarray(BOX.coords()[0])
    rng = np.random.default_rng(4)
    g = random_sequence(BOX, P.J, rng) * (x >= 0)
    b = sequence_phi_norm(g, P, "B")
    f = sequence_phi_norm(g, P, "F")
    pv, qv, cell = P.p.values, P.q.values, BOX.cell_volume
    assert abs(b - lq_Lp_plain(g, pv, qv, cell)) <= 1e-10 * b
    assert abs(f - Lp_lq_plain(g, pv, qv, cell)) <= 1e-10 * f


def test_peetre_variant(params, pair):
    th = thresholds(params)
    a = th["peetre_a"] + 0.25
    for f in sample_family(BOX)[::5]:
        conv = space_norm_variants(f, params, pair)
        assert conv == space_norm(f, params, pair)
        peetre = space_norm_variants(f, params, pair, a=a, variant="peetre")
        assert peetre >= conv * (1 - 1e-12)


def test_peetre_threshold_error(params, pair):
    bound = thresholds(params)["peetre_a"]
    with pytest.raises(ThresholdError) as exc:
        space_norm_variants(_gauss(), params, pair, a=bound - 0.5, variant="peetre")
    msg = str(exc.value)
    assert f"{bound:.6g}" in msg and f"{bound - 0.5:.6g}" in msg
    assert exc.value.bound == bound


def test_moment_threshold_error(pair):
    P = F_PRESET.build(BOX)
    lm0 = make_local_means(3.0, 0, BOX)
    with pytest.raises(ThresholdError):
        space_norm_variants(_gauss(), P, lm0)


def test_resolution_error(pair):
    P = B_PRESET.build(BOX, J=7)
    with pytest.raises(GridError):
        space_norm(_gauss(), P, pair)


def test_quasi_triangle(params, pair):
    r = 0.9 * min(1.0, params.p.p_minus, params.q.p_minus)
    fam = sample_family(BOX)
    rng = np.random.default_rng(0)
    for _ in range(6):
        i, j = rng.choice(len(fam), 2, replace=False)
        f, g = fam[i], fam[j] * rng.uniform(-2, 2)
        lhs = space_norm(f + g, params, pair) ** r
        rhs = space_norm(f, params, pair) ** r + space_norm(g, params, pair) ** r
        assert lhs <= rhs * (1 + 1e-8)


def test_monotone_in_J(pair):
    f = _gauss(s=0.5)
    values = [space_norm(f, B_PRESET.build(BOX, J=J), pair) for J in range(4)]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(values, values[1:]))
    assert (values[3] - values[2]) / values[3] < 1e-4


def test_equivalence_same_pair_is_one():
    rep = equivalence_experiment(B_PRESET, make_admissible_pair, make_admissible_pair,
                                 Box(1, 8.0, 256), family=canonical_family()[:6], refine=False)
    assert all(r["ratio"] == 1.0 for r in rep["items"])
    assert rep["spread"] == 1.0


def test_equivalence_shifted_pair_finite():
    rep = equivalence_experiment(F_PRESET, make_admissible_pair,
                                 lambda b: make_shifted_pair(b, 0.5), Box(1, 8.0, 256),
                                 family=canonical_family()[:8])
    assert math.isfinite(rep["spread"]) and rep["spread"] >= 1
    assert math.isfinite(rep["refined"]["spread"])


def test_eta_single_level(params):
    # one delta-like level: the ratio is the norm of eta_nu * delta over the delta
    from varbesov.grid import convolve
    from varbesov.kernels import eta
    R = thresholds(params)["eta_R"] + 0.5
    g = np.zeros((params.J + 1,) + BOX.shape)
    g[1, BOX.N // 2] = 1 / BOX.h
    conv = np.zeros_like(g)
    conv[1] = convolve(GridFunction(BOX, g[1]), eta(1, R, BOX)).values
    ratio = sequence_phi_norm(conv, params) / sequence_phi_norm(g, params)
    assert math.isfinite(ratio) and ratio > 0
    assert np.allclose(conv[1], eta(1, R, BOX).values, rtol=1e-10, atol=1e-12)


def test_eta_threshold_error(params):
    with pytest.raises(ThresholdError):
        eta_conv_ratio(params, thresholds(params)["eta_R"] - 0.1, trials=1)


def test_eta_ratio_small_run(params):
    rep = eta_conv_ratio(params, thresholds(params)["eta_R"] + 0.5, trials=5, seed=3)
    assert len(rep["ratios"]) == 5 and math.isfinite(rep["max_ratio"])
    again = eta_conv_ratio(params, thresholds(params)["eta_R"] + 0.5, trials=5, seed=3)
    assert again["ratios"] == rep["ratios"]


def test_discrete_single_level(params):
    g = np.zeros((params.J + 1,) + BOX.shape)
    g[1] = _gauss().values
    G = discrete_conv_sequence(g, 1.5, 0.5)
    for j in range(params.J + 1):
        D = 0.5 if j >= 1 else 1.5
        assert np.allclose(G[j], 2.0 ** (-abs(j - 1) * D) * g[1], rtol=1e-15)


def test_discrete_large_D_limit(params):
    rng = np.random.default_rng(1)
    g = random_sequence(BOX, params.J, rng)
    G = discrete_conv_sequence(g, 60.0, 60.0)
    assert np.allclose(G, g, rtol=1e-15)
    rep = discrete_conv_ratio(params, 60.0, 60.0, trials=3)
    assert abs(rep["max_ratio_B"] - 1) < 1e-12 and abs(rep["max_ratio_F"] - 1) < 1e-12


def test_discrete_threshold_errors(params):
    with pytest.raises(ThresholdError):
        discrete_conv_ratio(params, 0.0, 1.0, trials=1)
    with pytest.raises(ThresholdError):
        discrete_conv_ratio(params, 1.0, thresholds(params)["discrete_D2"], trials=1)


def test_thresholds_values():
    B, F = B_PRESET.build(BOX), F_PRESET.build(BOX)
    tb, tf = thresholds(B), thresholds(F)
    assert abs(tb["log2_c1_tilde"] - 0.1) < 1e-8
    assert tb["discrete_D2"] == pytest.approx(0.1, abs=1e-8)
    # F: n/min(p-, q-) + alpha + log2 c1~, with p-, q- close to 1.5
    pq = min(F.p.p_minus, F.q.p_minus)
    assert abs(pq - 1.5) < 1e-3
    assert tf["peetre_a"] == pytest.approx(1 / pq + F.w.alpha + 0.1, rel=1e-8)
    assert tb["peetre_a"] > tf["peetre_a"]
    assert tf["eta_R"] == pytest.approx(1.1, abs=1e-8)


def test_canonical_family_shape():
    fam = canonical_family()
    assert len(fam) == 20
    assert len({name for name, _ in fam}) == 20
    vals = sample_family(Box(2, 4.0, 32))
    assert all(v.values.shape == (32, 32) for v in vals)
