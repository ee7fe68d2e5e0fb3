import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from varbesov.exponents import VariableExponent, exponent_bounds
from varbesov.grid import Box, GridError, GridFunction, make_grid_function
from varbesov.weights import (WeightSequence, check_admissible_weights, make_weight_sequence,
                              make_weight_sequence_from_smoothness, weight_shift_constants)

BOX = Box(1, 8.0, 512)


def _smooth(fn, box=BOX):
    return make_grid_function(fn, box)


def test_zero_and_constant_smoothness():
    w = make_weight_sequence_from_smoothness(_smooth(0.0), 3)
    assert np.all(w.data == 1.0) and w.params == (0.0, 0.0, 0.0)
    w = make_weight_sequence_from_smoothness(_smooth(0.75), 4)
    assert w.alpha1 == w.alpha2 == 0.75
    assert np.allclose(w.data[:, 0], 2.0 ** (0.75 * np.arange(5)), rtol=1e-15)
    assert check_admissible_weights(w) == pytest.approx((0.0, 0.75, 0.75), abs=1e-12)


def test_variable_smoothness_bounds_match_exponent_bounds():
    s = lambda x: 1 + 0.25 * np.sin(x)
    w = make_weight_sequence_from_smoothness(_smooth(s), 3)
    lo, hi = exponent_bounds(VariableExponent.from_function(s, BOX))
    assert abs(w.alpha1 - lo) < 1e-12 and abs(w.alpha2 - hi) < 1e-12
    assert abs(w.alpha1 - 0.75) < 1e-3 and abs(w.alpha2 - 1.25) < 1e-3
    a, a1, a2 = check_admissible_weights(w)
    assert abs(a1 - w.alpha1) < 1e-12 and abs(a2 - w.alpha2) < 1e-12


def test_alpha_estimate_stable_under_refinement():
    s = lambda x: 1 + 0.25 * np.sin(x)
    alphas = [make_weight_sequence_from_smoothness(_smooth(s, Box(1, 8.0, N)), 3).alpha
              for N in (256, 512, 1024)]
    assert all(math.isfinite(a) and a > 0 for a in alphas)
    assert max(alphas) / min(alphas) < 1.1


def test_space_only_weight():
    sigma = 0.5
    w = make_weight_sequence(lambda j, x: 2.0 ** (j * sigma) / (1 + np.abs(x)), BOX, 3)
    assert abs(w.alpha1 - sigma) < 1e-12 and abs(w.alpha2 - sigma) < 1e-12
    # |log(1+|x|) - log(1+|y|)| <= log(1+|x-y|): alpha = 1 suffices at j = 0
    assert 0 < w.alpha <= 1.0 + 1e-9


def test_condition_ii_chain():
    w = make_weight_sequence_from_smoothness(_smooth(lambda x: 0.5 + 0.3 * np.cos(x)), 5)
    ratio = np.log2(w.data[-1] / w.data[0])
    J = w.J
    assert np.all(ratio >= J * w.alpha1 - 1e-9) and np.all(ratio <= J * w.alpha2 + 1e-9)


def test_positivity_and_truncation():
    with pytest.raises(GridError):
        WeightSequence(BOX, np.zeros((2,) + BOX.shape))
    w = make_weight_sequence_from_smoothness(_smooth(1.0), 3)
    assert w.truncated(1).J == 1
    with pytest.raises(GridError):
        w.truncated(5)


def test_shift_constants_finite():
    for s in [lambda x: 1 + 0.25 * np.sin(x), lambda x: 0.5 + 0.0 * x]:
        w = make_weight_sequence_from_smoothness(_smooth(s), 3)
        up, down = weight_shift_constants(w)
        assert math.isfinite(up) and math.isfinite(down)
        assert 0 < up < 10 and 0 < down < 10


def test_shift_constants_constant_weight_is_one():
    w = make_weight_sequence_from_smoothness(_smooth(0.5), 3)
    up, down = weight_shift_constants(w)
    assert abs(up - 1) < 1e-12 and abs(down - 1) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(-1.0, 2.0), st.floats(0.0, 0.5), st.floats(0.2, 2.0))
def test_smoothness_params_property(base, amp, freq):
    box = Box(1, 4.0, 128)
    vals = base + amp * np.sin(freq * np.asarray(box.coords()[0]))
    w = make_weight_sequence_from_smoothness(GridFunction(box, vals), 3)
    assert w.alpha1 == pytest.approx(vals.min(), abs=1e-12)
    assert w.alpha2 == pytest.approx(vals.max(), abs=1e-12)
    assert w.alpha >= 0
